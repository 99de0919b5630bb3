#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "schoolchoice/benchgen.hpp"
#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/eadam.hpp"
#include "schoolchoice/instance.hpp"
#include "schoolchoice/latin.hpp"
#include "schoolchoice/oracle.hpp"
#include "schoolchoice/rotate_remove.hpp"
#include "schoolchoice/rotations.hpp"

namespace schoolchoice::cli {

namespace {

using nlohmann::json;

struct DomainError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Instance load_instance(const std::string& path) {
    try {
        return parse_instance(read_file(path));
    } catch (const ParseError& e) {
        throw DomainError(path + ": " + e.what());
    } catch (const InvalidInput& e) {
        throw DomainError(path + ": " + e.what());
    }
}

json assignment_json(const Instance& inst, const Assignment& m) {
    json arr = json::array();
    for (int a = 0; a < inst.num_students(); ++a)
        arr.push_back({{"student", inst.student_name(a)},
                       {"school", m[a] == kNone ? json(nullptr) : json(inst.school_name(m[a]))}});
    return arr;
}

json edges_json(const Instance& inst, const std::vector<std::pair<StudentId, SchoolId>>& edges) {
    json arr = json::array();
    for (auto [a, b] : edges) arr.push_back({inst.student_name(a), inst.school_name(b)});
    return arr;
}

// Assignment blocks separated by blank lines.
std::vector<Assignment> parse_blocks(const Instance& inst, const std::string& text) {
    std::vector<Assignment> out;
    std::istringstream is(text);
    std::string line, block;
    auto flush = [&] {
        if (block.find_first_not_of(" \t\r\n") != std::string::npos)
            out.push_back(parse_assignment(inst, block));
        block.clear();
    };
    while (std::getline(is, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            flush();
        } else {
            block += line + '\n';
        }
    }
    flush();
    return out;
}

std::string format_blocks(const Instance& inst, const std::vector<Assignment>& ms) {
    std::string s;
    for (std::size_t i = 0; i < ms.size(); ++i) {
        if (i) s += '\n';
        s += format_assignment(inst, ms[i]);
    }
    return s;
}

void emit(const std::string& text, const std::string& output, std::ostream& out) {
    if (output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(output, std::ios::binary);
    if (!f) throw DomainError("cannot write '" + output + "'");
    f << text;
}

void write_counters(std::ostream& err, const MechanismCounters& c) {
    err << "proposals=" << c.proposals << '\n'
        << "edge_scans=" << c.edge_scans << '\n'
        << "rotations_eliminated=" << c.rotations_eliminated << '\n'
        << "edges_removed=" << c.edges_removed << '\n'
        << "gs_reruns=" << c.gs_reruns << '\n';
}

json counters_json(const MechanismCounters& c) {
    return {{"proposals", c.proposals},
            {"edge_scans", c.edge_scans},
            {"rotations_eliminated", c.rotations_eliminated},
            {"edges_removed", c.edges_removed},
            {"gs_reruns", c.gs_reruns}};
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (c != ' ') {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::pair<int, int> parse_quota_range(const std::string& s) {
    auto dash = s.find('-');
    try {
        if (dash == std::string::npos) {
            int v = std::stoi(s);
            return {v, v};
        }
        return {std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
    } catch (const std::exception&) {
        throw CLI::ValidationError("--quota", "expected LO-HI, got '" + s + "'");
    }
}

struct Common {
    std::string output;
    std::string format = "text";
};

void add_output(CLI::App* sub, Common& c) {
    sub->add_option("-o,--output", c.output, "Write the result to this file instead of stdout");
}

void add_format(CLI::App* sub, Common& c) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}))
        ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Stable, legal and EADAM assignments for school choice instances", "schoolchoice"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for all subcommands");

    // solve
    Common solve_c;
    std::string solve_mech, solve_input, solve_consent;
    std::optional<double> solve_rate;
    std::uint64_t solve_seed = 0;
    bool solve_counters = false, solve_trace = false;
    std::vector<std::string> mech_names;
    for (Mechanism m : all_mechanisms()) mech_names.emplace_back(mechanism_name(m));
    auto* solve = app.add_subcommand("solve", "Run one mechanism on an instance");
    solve->add_option("--mechanism", solve_mech, "Mechanism")->required()->check(CLI::IsMember(mech_names));
    solve->add_option("-i,--input", solve_input, "Instance file")->required();
    auto* consent_opt = solve->add_option("--consent", solve_consent, "File of consenting student ids");
    solve->add_option("--consent-rate", solve_rate, "Sample consent with this probability")
        ->check(CLI::Range(0.0, 1.0))
        ->excludes(consent_opt);
    solve->add_option("--seed", solve_seed, "Seed for --consent-rate");
    solve->add_flag("--counters", solve_counters, "Print operation counters to stderr");
    solve->add_flag("--trace", solve_trace, "Print the round-by-round proposal trace to stderr");
    add_output(solve, solve_c);
    add_format(solve, solve_c);

    // oracle
    Common oracle_c;
    std::string oracle_mode, oracle_input, oracle_candidates;
    std::int64_t oracle_cap = kDefaultEnumerationCap;
    bool oracle_maximal = false, oracle_trace = false;
    auto* oracle = app.add_subcommand("oracle", "Brute-force stable and legal sets");
    oracle->add_option("mode", oracle_mode, "legal, stable or verify")
        ->required()
        ->check(CLI::IsMember({"legal", "stable", "verify"}));
    oracle->add_option("-i,--input", oracle_input, "Instance file")->required();
    oracle->add_option("--cap", oracle_cap, "Refuse to enumerate more than this many assignments")
        ->capture_default_str();
    oracle->add_option("--candidates", oracle_candidates,
                       "verify: file of assignments separated by blank lines");
    oracle->add_flag("--maximal", oracle_maximal, "Only print maximal assignments");
    oracle->add_flag("--trace", oracle_trace, "legal: print every iterate of the fixed point");
    add_output(oracle, oracle_c);
    add_format(oracle, oracle_c);

    // latin
    Common latin_c;
    auto* latin = app.add_subcommand("latin", "Latin-square instances");
    latin->require_subcommand(1);
    int latin_order = 0;
    std::string latin_family = "xor", latin_as = "matrix", latin_input, latin_matrix;
    bool latin_legal = false;
    std::int64_t latin_cap = kDefaultEnumerationCap;
    auto* lgen = latin->add_subcommand("gen", "Generate a Latin square");
    lgen->add_option("--order", latin_order, "Order n")->required()->check(CLI::PositiveNumber);
    lgen->add_option("--family", latin_family, "Generator family")
        ->check(CLI::IsMember({"xor"}))
        ->capture_default_str();
    lgen->add_option("--as", latin_as, "Print the matrix or the derived instance")
        ->check(CLI::IsMember({"matrix", "instance"}))
        ->capture_default_str();
    add_output(lgen, latin_c);
    auto* laux = latin->add_subcommand("aux", "Auxiliary instance with one stable matching");
    auto* lcount = latin->add_subcommand("count", "Count stable (and legal) matchings");
    for (auto* s : {laux, lcount}) {
        auto* in = s->add_option("-i,--input", latin_input, "Instance file");
        auto* mx = s->add_option("--matrix", latin_matrix, "Matrix file, one row per line");
        in->excludes(mx);
        mx->excludes(in);
        add_output(s, latin_c);
    }
    lcount->add_flag("--legal", latin_legal, "Also count legal matchings");
    lcount->add_option("--cap", latin_cap, "Enumeration cap")->capture_default_str();

    // gen
    Common gen_c;
    GenConfig gen_cfg;
    std::string gen_quota;
    bool gen_nyc = false;
    int gen_trunc = 0;
    auto* gen = app.add_subcommand("gen", "Generate a random instance");
    gen->add_option("--students", gen_cfg.n_students, "Number of students")->required()->check(CLI::PositiveNumber);
    gen->add_option("--schools", gen_cfg.n_schools, "Number of schools")->required()->check(CLI::PositiveNumber);
    auto* gq = gen->add_option("--quota", gen_quota, "Uniform quota range LO-HI (default 50-150)");
    gen->add_flag("--nyc", gen_nyc, "Quotas around the mean load")->excludes(gq);
    gen->add_option("--truncate", gen_trunc, "Keep only each student's top k schools")
        ->check(CLI::PositiveNumber);
    gen->add_option("--seed", gen_cfg.seed, "Seed");
    add_output(gen, gen_c);

    // bench
    Common bench_c;
    std::string b_students, b_schools, b_mechs = "gs,eadam-fast", b_rates = "1", b_quota, b_repro;
    int b_reps = 1, b_trunc = 0, b_threads = 1;
    bool b_nyc = false;
    std::uint64_t b_seed = 0;
    std::optional<double> b_timeout;
    auto* bench = app.add_subcommand("bench", "Generate instances, run mechanisms, write CSV");
    bench->add_option("--students", b_students, "Comma-separated student counts")->required();
    bench->add_option("--schools", b_schools, "Comma-separated school counts (one value broadcasts)")
        ->required();
    bench->add_option("--mechanisms", b_mechs, "Comma-separated mechanisms")->capture_default_str();
    bench->add_option("--rates", b_rates, "Comma-separated consent rates")->capture_default_str();
    bench->add_option("--reps", b_reps, "Repetitions per size")->check(CLI::PositiveNumber);
    auto* bq = bench->add_option("--quota", b_quota, "Uniform quota range LO-HI");
    bench->add_flag("--nyc", b_nyc, "Quotas around the mean load")->excludes(bq);
    bench->add_option("--truncate", b_trunc, "Top-k student lists")->check(CLI::PositiveNumber);
    bench->add_option("--seed", b_seed, "Base seed");
    bench->add_option("--timeout-ms", b_timeout, "Per-mechanism time limit");
    bench->add_option("--threads", b_threads, "Worker threads")->check(CLI::PositiveNumber);
    bench->add_option("--reproducer-dir", b_repro, "Directory for reproducer bundles");
    add_output(bench, bench_c);

    // reduce
    Common reduce_c;
    std::string reduce_input;
    auto* reduce = app.add_subcommand("reduce", "Expand schools into unit-quota seats");
    reduce->add_option("-i,--input", reduce_input, "Instance file")->required();
    add_output(reduce, reduce_c);

    // validate
    std::string validate_input;
    auto* validate = app.add_subcommand("validate", "Check an instance file");
    validate->add_option("-i,--input", validate_input, "Instance file")->required();

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (*solve) {
            Instance inst = load_instance(solve_input);
            ConsentSet consent = ConsentSet::all(inst);
            if (!solve_consent.empty())
                consent = ConsentSet::parse(inst, read_file(solve_consent));
            else if (solve_rate)
                consent = sample_consent(inst, *solve_rate, solve_seed);
            Mechanism mech = *parse_mechanism(solve_mech);
            auto run = run_mechanism(mech, inst, consent);
            std::string text;
            if (solve_c.format == "json") {
                json j{{"mechanism", solve_mech},
                       {"assignment", assignment_json(inst, run.assignment)},
                       {"counters", counters_json(run.counters)}};
                if (run.report) {
                    j["legal_edges"] = edges_json(inst, run.report->legal_edges);
                    json ill = json::array();
                    for (const auto& e : run.report->illegal_edges)
                        ill.push_back({inst.student_name(e.student), inst.school_name(e.school),
                                       removal_reason_name(e.reason)});
                    j["illegal_edges"] = ill;
                    j["student_optimal_legal"] = assignment_json(inst, run.report->student_optimal_legal);
                    j["school_optimal_legal"] = assignment_json(inst, run.report->school_optimal_legal);
                }
                text = j.dump(2) + "\n";
            } else if (run.report) {
                text = format_legal_report(inst, *run.report);
            } else {
                text = format_assignment(inst, run.assignment);
            }
            emit(text, solve_c.output, out);
            if (solve_trace) err << format_trace(inst, gs_student_traced(inst).trace);
            if (solve_counters) write_counters(err, run.counters);
            return kOk;
        }

        if (*oracle) {
            Instance inst = load_instance(oracle_input);
            auto filter = [&](std::vector<Assignment> ms) {
                if (oracle_maximal)
                    std::erase_if(ms, [&](const Assignment& m) { return !is_maximal(inst, m); });
                return ms;
            };
            if (oracle_mode == "verify") {
                if (oracle_candidates.empty()) throw CLI::RequiredError("--candidates");
                auto cand = parse_blocks(inst, read_file(oracle_candidates));
                auto v = verify_legal_property(inst, cand, oracle_cap);
                std::string text;
                if (oracle_c.format == "json") {
                    json j{{"legal", v.ok}};
                    if (!v.ok) {
                        j["failure"] = v.failure == LegalVerdict::Failure::Internal ? "internal" : "external";
                        if (v.blocker) j["blocker"] = assignment_json(inst, *v.blocker);
                        if (v.blocked) j["blocked"] = assignment_json(inst, *v.blocked);
                    }
                    text = j.dump(2) + "\n";
                } else if (v.ok) {
                    text = "legal\n";
                } else if (v.failure == LegalVerdict::Failure::Internal) {
                    text = "not legal: a member blocks a member\nblocker:\n" +
                           format_assignment(inst, *v.blocker) + "blocked:\n" +
                           format_assignment(inst, *v.blocked);
                } else {
                    text = "not legal: a non-member is blocked by no member\nunblocked:\n" +
                           format_assignment(inst, *v.blocked);
                }
                emit(text, oracle_c.output, out);
                return v.ok ? kOk : kDomainError;
            }
            std::vector<std::vector<Assignment>> groups;
            if (oracle_mode == "stable") {
                groups.push_back(filter(enumerate_stable(inst, oracle_cap)));
            } else {
                auto fp = legal_fixed_point(inst, oracle_cap);
                if (oracle_trace)
                    for (auto& l : fp.trace) groups.push_back(filter(std::move(l)));
                else
                    groups.push_back(filter(std::move(fp.legal)));
            }
            std::string text;
            if (oracle_c.format == "json") {
                json j = json::array();
                for (const auto& g : groups) {
                    json arr = json::array();
                    for (const auto& m : g) arr.push_back(assignment_json(inst, m));
                    j.push_back(arr);
                }
                text = (groups.size() == 1 ? j[0] : j).dump(2) + "\n";
            } else if (groups.size() == 1) {
                text = format_blocks(inst, groups[0]);
            } else {
                for (std::size_t i = 0; i < groups.size(); ++i) {
                    text += "# L^" + std::to_string(i) + " (" + std::to_string(groups[i].size()) + ")\n";
                    text += format_blocks(inst, groups[i]);
                    if (i + 1 < groups.size()) text += '\n';
                }
            }
            emit(text, oracle_c.output, out);
            return kOk;
        }

        if (*latin) {
            auto load_latin_input = [&]() -> Instance {
                if (!latin_matrix.empty()) return instance_from_latin(parse_latin(read_file(latin_matrix)));
                if (latin_input.empty()) throw CLI::RequiredError("--input or --matrix");
                return load_instance(latin_input);
            };
            if (*lgen) {
                auto q = xor_latin(latin_order);
                emit(latin_as == "matrix" ? format_latin(q) : format_instance(instance_from_latin(q)),
                     latin_c.output, out);
                return kOk;
            }
            if (*laux) {
                emit(format_instance(auxiliary_instance(load_latin_input())), latin_c.output, out);
                return kOk;
            }
            Instance inst = load_latin_input();
            std::string text = "stable " + std::to_string(enumerate_stable(inst, latin_cap).size()) + "\n";
            if (latin_legal)
                text += "legal " + std::to_string(legal_fixed_point(inst, latin_cap).legal.size()) + "\n";
            emit(text, latin_c.output, out);
            return kOk;
        }

        if (*gen) {
            if (gen_nyc) gen_cfg.quota_model = QuotaModel::Nyc;
            if (!gen_quota.empty()) std::tie(gen_cfg.quota_min, gen_cfg.quota_max) = parse_quota_range(gen_quota);
            if (gen_trunc > 0) gen_cfg.truncate = gen_trunc;
            std::string warning;
            Instance inst = generate(gen_cfg, &warning);
            if (!warning.empty()) err << "warning: " << warning << '\n';
            emit(format_instance(inst), gen_c.output, out);
            return kOk;
        }

        if (*bench) {
            auto st = split_list(b_students), sc = split_list(b_schools);
            if (st.empty() || sc.empty() || (sc.size() != 1 && sc.size() != st.size()))
                throw CLI::ValidationError("--schools", "give one value or one per --students entry");
            std::vector<Mechanism> mechs;
            for (const auto& n : split_list(b_mechs)) {
                auto m = parse_mechanism(n);
                if (!m) throw CLI::ValidationError("--mechanisms", "unknown mechanism '" + n + "'");
                mechs.push_back(*m);
            }
            std::vector<double> rates;
            for (const auto& r : split_list(b_rates)) {
                try {
                    rates.push_back(std::stod(r));
                } catch (const std::exception&) {
                    throw CLI::ValidationError("--rates", "not a number: '" + r + "'");
                }
            }
            std::vector<BenchCell> plan;
            for (std::size_t i = 0; i < st.size(); ++i) {
                BenchCell cell;
                try {
                    cell.config.n_students = std::stoi(st[i]);
                    cell.config.n_schools = std::stoi(sc.size() == 1 ? sc[0] : sc[i]);
                } catch (const std::exception&) {
                    throw CLI::ValidationError("--students/--schools", "sizes must be integers");
                }
                if (b_nyc) cell.config.quota_model = QuotaModel::Nyc;
                if (!b_quota.empty())
                    std::tie(cell.config.quota_min, cell.config.quota_max) = parse_quota_range(b_quota);
                if (b_trunc > 0) cell.config.truncate = b_trunc;
                cell.config.seed = SplitMix64(b_seed).split(i).next();
                cell.mechanisms = mechs;
                cell.consent_rates = rates;
                cell.repetitions = b_reps;
                plan.push_back(cell);
            }
            BenchOptions bo;
            bo.timeout_ms = b_timeout;
            bo.threads = b_threads;
            bo.reproducer_dir = b_repro;
            auto records = run_bench(plan, bo);
            std::ostringstream csv;
            write_csv(csv, records);
            emit(csv.str(), bench_c.output, out);
            err << "rng=" << SplitMix64::kName << "/v" << SplitMix64::kVersion << '\n';
            return kOk;
        }

        if (*reduce) {
            Instance inst = load_instance(reduce_input);
            emit(format_instance(reduce_one_to_one(inst).marriage), reduce_c.output, out);
            return kOk;
        }

        if (*validate) {
            Instance inst = load_instance(validate_input);
            out << "ok: " << inst.num_students() << " students, " << inst.num_schools() << " schools, "
                << inst.num_edges() << " edges\n";
            return kOk;
        }
    } catch (const CLI::Error& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const EqualityViolation& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kDomainError;
    }
    return kUsageError;
}

}  // namespace schoolchoice::cli
