#include "schoolchoice/benchgen.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "schoolchoice/deferred_acceptance.hpp"

namespace schoolchoice {

void GenConfig::validate() const {
    if (n_students < 1 || n_schools < 1) throw std::invalid_argument("need at least one student and one school");
    if (quota_model == QuotaModel::Uniform && (quota_min < 1 || quota_max < quota_min))
        throw std::invalid_argument("quota bounds must satisfy 1 <= min <= max");
    if (truncate && *truncate < 1) throw std::invalid_argument("truncation length must be at least 1");
}

std::pair<int, int> GenConfig::quota_range() const {
    if (quota_model == QuotaModel::Uniform) return {quota_min, quota_max};
    const int mu = (n_students + n_schools - 1) / n_schools;
    return {(mu + 1) / 2, (3 * mu + 1) / 2};
}

std::string GenConfig::quota_model_name() const {
    auto [lo, hi] = quota_range();
    std::string base = quota_model == QuotaModel::Uniform ? "uniform" : "nyc";
    return base + ":" + std::to_string(lo) + "-" + std::to_string(hi);
}

namespace {

std::vector<std::string> names(const char* prefix, int n) {
    std::vector<std::string> out;
    out.reserve(n);
    for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

std::vector<int> draw_quotas(const GenConfig& cfg, SplitMix64 rng) {
    auto [lo, hi] = cfg.quota_range();
    std::vector<int> q(cfg.n_schools);
    for (auto& x : q) x = static_cast<int>(rng.range(lo, hi));
    return q;
}

}  // namespace

Instance gen_complete(const GenConfig& cfg) {
    cfg.validate();
    SplitMix64 root(cfg.seed);
    auto quotas = draw_quotas(cfg, root.split(0));
    SplitMix64 srng = root.split(1), brng = root.split(2);
    std::vector<std::vector<SchoolId>> sp(cfg.n_students);
    std::vector<std::vector<StudentId>> bp(cfg.n_schools);
    for (auto& l : sp) {
        l.resize(cfg.n_schools);
        std::iota(l.begin(), l.end(), 0);
        srng.shuffle(l);
    }
    for (auto& l : bp) {
        l.resize(cfg.n_students);
        std::iota(l.begin(), l.end(), 0);
        brng.shuffle(l);
    }
    return Instance::from_lists(names("a", cfg.n_students), names("b", cfg.n_schools),
                                std::move(quotas), sp, bp);
}

Instance gen_truncated(const GenConfig& cfg, std::string* warning) {
    cfg.validate();
    int k = cfg.truncate.value_or(cfg.n_schools);
    if (k > cfg.n_schools) {
        if (warning)
            *warning = "truncation " + std::to_string(k) + " exceeds the number of schools; clamped to " +
                       std::to_string(cfg.n_schools);
        k = cfg.n_schools;
    }
    SplitMix64 root(cfg.seed);
    auto quotas = draw_quotas(cfg, root.split(0));
    SplitMix64 srng = root.split(1), brng = root.split(2);
    std::vector<std::vector<SchoolId>> sp(cfg.n_students);
    std::vector<std::vector<StudentId>> bp(cfg.n_schools);
    std::vector<SchoolId> perm(cfg.n_schools);
    std::iota(perm.begin(), perm.end(), 0);
    for (int a = 0; a < cfg.n_students; ++a) {
        // Partial Fisher-Yates: the first k slots are the prefix of a
        // uniform permutation.
        for (int i = 0; i < k; ++i)
            std::swap(perm[i], perm[i + srng.below(static_cast<std::uint64_t>(cfg.n_schools - i))]);
        sp[a].assign(perm.begin(), perm.begin() + k);
        for (SchoolId b : sp[a]) bp[b].push_back(a);
    }
    for (auto& l : bp) brng.shuffle(l);
    return Instance::from_lists(names("a", cfg.n_students), names("b", cfg.n_schools),
                                std::move(quotas), sp, bp);
}

Instance generate(const GenConfig& cfg, std::string* warning) {
    return cfg.truncate ? gen_truncated(cfg, warning) : gen_complete(cfg);
}

ConsentSet sample_consent(const Instance& inst, double rate, std::uint64_t seed) {
    if (!(rate >= 0.0 && rate <= 1.0)) throw std::invalid_argument("consent rate must be in [0, 1]");
    SplitMix64 rng(seed);
    ConsentSet c = ConsentSet::none(inst);
    for (int a = 0; a < inst.num_students(); ++a) c.set(a, rng.uniform() < rate);
    return c;
}

const char* mechanism_name(Mechanism m) {
    switch (m) {
        case Mechanism::Gs: return "gs";
        case Mechanism::Eadam: return "eadam";
        case Mechanism::EadamSimplified: return "eadam-simplified";
        case Mechanism::EadamFast: return "eadam-fast";
        case Mechanism::LegalStudentOpt: return "legal-student-opt";
        case Mechanism::LegalSchoolOpt: return "legal-school-opt";
        case Mechanism::LegalSubgraph: return "legal-subgraph";
    }
    return "?";
}

const std::vector<Mechanism>& all_mechanisms() {
    static const std::vector<Mechanism> all{Mechanism::Gs,
                                            Mechanism::Eadam,
                                            Mechanism::EadamSimplified,
                                            Mechanism::EadamFast,
                                            Mechanism::LegalStudentOpt,
                                            Mechanism::LegalSchoolOpt,
                                            Mechanism::LegalSubgraph};
    return all;
}

std::optional<Mechanism> parse_mechanism(std::string_view name) {
    for (Mechanism m : all_mechanisms())
        if (name == mechanism_name(m)) return m;
    return std::nullopt;
}

bool is_eadam(Mechanism m) {
    return m == Mechanism::Eadam || m == Mechanism::EadamSimplified || m == Mechanism::EadamFast;
}

MechanismRun run_mechanism(Mechanism mech, const Instance& inst, const ConsentSet& consent,
                           Deadline deadline) {
    MechanismRun run;
    auto& c = run.counters;
    auto from_stats = [&](const EadamStats& s) {
        c.proposals = s.proposals;
        c.edge_scans = s.edge_scans;
        c.rotations_eliminated = s.rotations_eliminated;
        c.edges_removed = s.edges_removed;
        c.gs_reruns = s.gs_reruns;
    };
    auto from_rr = [&](const RotateRemoveResult& r) {
        c.proposals = r.counters.proposals;
        c.edge_scans = r.counters.edge_scans;
        c.rotations_eliminated = static_cast<std::int64_t>(r.rotations.size());
        c.edges_removed = r.counters.edges_removed;
        c.gs_reruns = 1;
    };
    auto t0 = std::chrono::steady_clock::now();
    switch (mech) {
        case Mechanism::Gs: {
            DaCounters dc;
            run.assignment = gs_student(inst, &dc);
            c.proposals = dc.proposals;
            c.edge_scans = dc.scans;
            c.gs_reruns = 1;
            break;
        }
        case Mechanism::Eadam: {
            EadamStats s;
            run.assignment = kesten_eadam(inst, consent, &s, deadline);
            from_stats(s);
            break;
        }
        case Mechanism::EadamSimplified: {
            EadamStats s;
            run.assignment = simplified_eadam(inst, consent, &s, deadline);
            from_stats(s);
            break;
        }
        case Mechanism::EadamFast: {
            EadamStats s;
            run.assignment = rotate_remove_consent(inst, consent, &s);
            from_stats(s);
            break;
        }
        case Mechanism::LegalStudentOpt: {
            auto r = rotate_remove(inst, Side::Schools);
            from_rr(r);
            run.assignment = std::move(r.assignment);
            break;
        }
        case Mechanism::LegalSchoolOpt: {
            auto r = rotate_remove(inst, Side::Students);
            from_rr(r);
            run.assignment = std::move(r.assignment);
            break;
        }
        case Mechanism::LegalSubgraph: {
            auto rep = legal_subinstance(inst);
            c.edge_scans = rep.edge_scans;
            c.proposals = rep.proposals;
            c.rotations_eliminated = static_cast<std::int64_t>(rep.r1.size() + rep.r2.size() + rep.r3.size());
            c.edges_removed = static_cast<std::int64_t>(rep.illegal_edges.size());
            c.gs_reruns = 3;
            run.assignment = rep.student_optimal_legal;
            run.report = std::move(rep);
            break;
        }
    }
    run.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return run;
}

EqualityViolation::EqualityViolation(const std::string& what, std::string bundle_)
    : std::runtime_error(what), bundle(std::move(bundle_)) {}

std::uint64_t instance_seed(std::uint64_t cell_seed, int repetition) {
    return SplitMix64(cell_seed).split(static_cast<std::uint64_t>(repetition)).next();
}

std::uint64_t consent_seed(std::uint64_t inst_seed, double rate) {
    std::uint64_t bits;
    std::memcpy(&bits, &rate, sizeof bits);
    return SplitMix64(inst_seed ^ 0x5bd1e9955bd1e995ULL).split(bits).next();
}

namespace {

struct Task {
    std::size_t cell;
    int rep;
};

struct TaskOutput {
    std::vector<std::pair<std::array<std::size_t, 3>, BenchRecord>> rows;  // (mech, rep, rate) key
};

std::string write_bundle(const std::string& dir, const Instance& inst, const ConsentSet& consent,
                         std::uint64_t seed, double rate,
                         const std::vector<std::pair<Mechanism, Assignment>>& outs) {
    if (dir.empty()) return {};
    namespace fs = std::filesystem;
    fs::path p = fs::path(dir) / ("violation-" + std::to_string(seed));
    fs::create_directories(p);
    std::ofstream(p / "instance.inst") << format_instance(inst);
    {
        std::ofstream c(p / "consent.txt");
        for (int a = 0; a < inst.num_students(); ++a)
            if (consent.contains(a)) c << inst.student_name(a) << '\n';
    }
    std::ofstream(p / "seed.txt") << "seed " << seed << "\nconsent_rate " << rate << '\n';
    for (const auto& [m, a] : outs)
        std::ofstream(p / (std::string(mechanism_name(m)) + ".out")) << format_assignment(inst, a);
    return p.string();
}

TaskOutput run_task(const std::vector<BenchCell>& plan, const Task& t, const BenchOptions& opt) {
    const BenchCell& cell = plan[t.cell];
    GenConfig cfg = cell.config;
    cfg.seed = instance_seed(cell.config.seed, t.rep);
    Instance inst = generate(cfg);
    TaskOutput out;
    for (std::size_t ri = 0; ri < cell.consent_rates.size(); ++ri) {
        double rate = cell.consent_rates[ri];
        ConsentSet consent = sample_consent(inst, rate, consent_seed(cfg.seed, rate));
        std::vector<std::pair<Mechanism, Assignment>> eadam_outs;
        for (std::size_t mi = 0; mi < cell.mechanisms.size(); ++mi) {
            Mechanism mech = cell.mechanisms[mi];
            Deadline dl;
            if (opt.timeout_ms)
                dl = std::chrono::steady_clock::now() +
                     std::chrono::microseconds(static_cast<std::int64_t>(*opt.timeout_ms * 1000));
            MechanismRun run;
            try {
                run = run_mechanism(mech, inst, consent, dl);
            } catch (const MechanismTimeout&) {
                throw MechanismTimeout(std::string(mechanism_name(mech)) + " exceeded " +
                                       std::to_string(*opt.timeout_ms) + " ms on instance seed " +
                                       std::to_string(cfg.seed));
            }
            if (opt.timeout_ms && run.wall_ms > *opt.timeout_ms)
                throw MechanismTimeout(std::string(mechanism_name(mech)) + " exceeded " +
                                       std::to_string(*opt.timeout_ms) + " ms on instance seed " +
                                       std::to_string(cfg.seed));
            if (is_eadam(mech)) eadam_outs.emplace_back(mech, run.assignment);
            BenchRecord r;
            r.instance_id = "c" + std::to_string(t.cell) + "-r" + std::to_string(t.rep);
            r.n_students = inst.num_students();
            r.n_schools = inst.num_schools();
            r.n_edges = inst.num_edges();
            r.quota_model = cfg.quota_model_name();
            r.mechanism = mechanism_name(mech);
            r.consent_rate = rate;
            r.seed = cfg.seed;
            r.repetition = t.rep;
            r.wall_time_ms = run.wall_ms;
            r.counters = run.counters;
            out.rows.push_back({{mi, static_cast<std::size_t>(t.rep), ri}, std::move(r)});
        }
        for (std::size_t i = 1; i < eadam_outs.size(); ++i)
            if (eadam_outs[i].second != eadam_outs[0].second) {
                auto bundle = write_bundle(opt.reproducer_dir, inst, consent, cfg.seed, rate, eadam_outs);
                throw EqualityViolation(std::string("EADAM outputs differ: ") +
                                            mechanism_name(eadam_outs[0].first) + " vs " +
                                            mechanism_name(eadam_outs[i].first) + " (seed " +
                                            std::to_string(cfg.seed) + ", rate " + std::to_string(rate) +
                                            ")" + (bundle.empty() ? "" : "; reproducer in " + bundle),
                                        bundle);
            }
    }
    return out;
}

}  // namespace

std::vector<BenchRecord> run_bench(const std::vector<BenchCell>& plan, const BenchOptions& opt) {
    if (plan.empty()) throw std::invalid_argument("bench plan is empty");
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < plan.size(); ++c) {
        plan[c].config.validate();
        if (plan[c].mechanisms.empty()) throw std::invalid_argument("bench cell without mechanisms");
        for (int r = 0; r < plan[c].repetitions; ++r) tasks.push_back({c, r});
    }
    std::vector<TaskOutput> outs(tasks.size());
    const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(tasks.size())));
    if (threads == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) outs[i] = run_task(plan, tasks[i], opt);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr error;
        std::mutex mu;
        std::vector<std::thread> pool;
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (std::size_t i; (i = next++) < tasks.size();) {
                    try {
                        outs[i] = run_task(plan, tasks[i], opt);
                    } catch (...) {
                        std::lock_guard lock(mu);
                        if (!error) error = std::current_exception();
                        next = tasks.size();
                    }
                }
            });
        for (auto& t : pool) t.join();
        if (error) std::rethrow_exception(error);
    }
    // Canonical order: cell, mechanism, repetition, consent rate.
    std::vector<std::pair<std::array<std::size_t, 4>, BenchRecord>> keyed;
    for (std::size_t i = 0; i < tasks.size(); ++i)
        for (auto& [k, r] : outs[i].rows) keyed.push_back({{tasks[i].cell, k[0], k[1], k[2]}, std::move(r)});
    std::stable_sort(keyed.begin(), keyed.end(),
                     [](const auto& x, const auto& y) { return x.first < y.first; });
    std::vector<BenchRecord> records;
    for (auto& [k, r] : keyed) records.push_back(std::move(r));
    return records;
}

void write_csv(std::ostream& os, const std::vector<BenchRecord>& records) {
    os << "instance_id,n_students,n_schools,n_edges,quota_model,mechanism,consent_rate,seed,"
          "repetition,wall_time_ms,proposals,edge_scans,rotations_eliminated,edges_removed,gs_reruns\n";
    for (const auto& r : records) {
        std::ostringstream t;
        t << std::fixed << std::setprecision(3) << r.wall_time_ms;
        os << r.instance_id << ',' << r.n_students << ',' << r.n_schools << ',' << r.n_edges << ','
           << r.quota_model << ',' << r.mechanism << ',' << r.consent_rate << ',' << r.seed << ','
           << r.repetition << ',' << t.str() << ',' << r.counters.proposals << ','
           << r.counters.edge_scans << ',' << r.counters.rotations_eliminated << ','
           << r.counters.edges_removed << ',' << r.counters.gs_reruns << '\n';
    }
}

}  // namespace schoolchoice
