// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "properties.hpp"
#include "schoolchoice/benchgen.hpp"
#include "schoolchoice/latin.hpp"
#include "support.hpp"

using namespace schoolchoice;
using namespace testsupport;

namespace {

// Tolerances.
constexpr double kGoldenBudgetSeconds = 1.0;
constexpr int kPropertyInstances = 1000;
constexpr int kRobustInstances = 100;
constexpr int kRobustRuns = 50;
constexpr double kExponentLo = 0.9;
constexpr double kExponentHi = 1.1;
constexpr std::int64_t kScanFactor = 8;
constexpr int kLinearityReps = 3;
constexpr int kSpeedInstances = 10;
constexpr double kFastVsSimplified = 0.25;
constexpr double kFastVsGs = 5.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::vector<Instance> property_instances() {
    SplitMix64 rng(20240601);
    std::vector<Instance> out;
    for (int i = 0; i < kPropertyInstances; ++i) out.push_back(random_small(rng, 7, 3, 2));
    return out;
}

// Criterion 1.
Verdict golden_examples() {
    std::vector<std::string> failures;
    auto expect = [&](bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    };
    auto t0 = Clock::now();

    auto ex1 = fixture("ex1.inst");
    auto m1 = named(ex1, {{"1", "B"}, {"2", "A"}, {"3", "C"}});
    auto m2 = named(ex1, {{"1", "A"}, {"2", "B"}, {"3", "C"}});
    expect(sorted(legal_fixed_point(ex1).legal) == sorted({m1, m2}), "ex1 legal set (oracle)");
    auto gl = legal_subinstance(ex1).mask(ex1).restrict(ex1);
    expect(sorted(enumerate_stable(gl)) == sorted({m1, m2}), "ex1 legal set (via G_L)");

    auto ex2 = fixture("ex2.inst");
    auto m = named(ex2, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b2"}, {"a4", "b1"}});
    expect(legal_fixed_point(ex2).legal == std::vector<Assignment>{m}, "ex2 legal set");
    auto red = reduce_one_to_one(ex2);
    auto m2h = named(red.marriage, {{"a1", "b1^2"}, {"a2", "b2^1"}, {"a3", "b1^1"}, {"a4", "b2^2"}});
    auto m3h = named(red.marriage, {{"a1", "b1^2"}, {"a2", "b2^1"}, {"a3", "b2^2"}, {"a4", "b1^1"}});
    expect(sorted(legal_fixed_point(red.marriage).legal) == sorted({m2h, m3h}), "ex2 seat legal set");
    expect(red.pi(ex2, m) == m3h, "ex2 pi(M) = M_3H");

    auto ex3 = fixture("ex3.inst");
    auto st = rotate_remove(ex3, Side::Students);
    auto sc = rotate_remove(ex3, Side::Schools);
    using Edges = std::vector<std::pair<StudentId, SchoolId>>;
    expect(st.assignment ==
               named(ex3, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b2"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b3"}}),
           "ex3 student-rotate-remove output");
    expect(st.removed == Edges{{0, 2}}, "ex3 removed a1b3");
    expect(sc.assignment ==
               named(ex3, {{"a1", "b2"}, {"a2", "b2"}, {"a3", "b3"}, {"a4", "b1"}, {"a5", "b3"}, {"a6", "b1"}}),
           "ex3 school-rotate-remove output");
    expect(sc.removed == Edges{{1, 0}}, "ex3 removed a2b1");

    auto ex4 = fixture("ex4.inst");
    expect(rotate_remove(ex4, Side::Schools).assignment == Assignment(std::vector<SchoolId>{0, 1, 2, 3, 4}),
           "ex4 final assignment (1,2,3,4,5)");

    auto ex5 = fixture("ex5.inst");
    auto c5 = ConsentSet::parse(ex5, read_text(fixture_path("ex5.consent")));
    auto want5 = named(ex5, {{"a1", "b1"}, {"a2", "b2"}, {"a3", "b4"}, {"a4", "b3"}});
    expect(kesten_eadam(ex5, c5) == want5, "ex5 EADAM");
    expect(simplified_eadam(ex5, c5) == want5, "ex5 simplified EADAM");
    expect(rotate_remove_consent(ex5, c5) == want5, "ex5 rotate-remove with consent");

    auto c8 = ConsentSet::parse(ex4, read_text(fixture_path("ex8.consent")));
    expect(rotate_remove_consent(ex4, c8) == Assignment(std::vector<SchoolId>{3, 2, 1, 0, 4}),
           "ex4 with ex8.consent gives (4,3,2,1,5)");

    auto latin = instance_from_latin(parse_latin(read_text(fixture_path("ex9.matrix"))));
    auto aux = auxiliary_instance(latin);
    expect(enumerate_stable(latin).size() == 10, "ex9: 10 stable in Latin instance");
    expect(enumerate_stable(aux).size() == 1, "ex9: 1 stable in auxiliary instance");
    expect(legal_fixed_point(aux).legal.size() == 10, "ex9: 10 legal in auxiliary instance");

    double secs = seconds_since(t0);
    Verdict o;
    o.pass = failures.empty() && secs < kGoldenBudgetSeconds;
    std::ostringstream d;
    d << "fixtures ex1-ex9 in " << secs << " s (budget " << kGoldenBudgetSeconds << " s)";
    for (const auto& f : failures) d << "; mismatch: " << f;
    o.detail = d.str();
    return o;
}

// Criterion 2.
Verdict oracle_equivalence(const std::vector<Instance>& insts) {
    auto t0 = Clock::now();
    SplitMix64 rng(77);
    int bad = 0, wider = 0, moved = 0;
    std::string first;
    for (const auto& inst : insts) {
        auto consent = random_consent(rng, inst);
        auto err = check_legal_properties(inst);
        if (err.empty()) err = check_eadam_properties(inst, consent);
        if (!err.empty() && bad++ == 0) first = err;
        // Coverage: how many instances exercise the non-trivial cases.
        wider += legal_fixed_point(inst).legal.size() > enumerate_stable(inst).size();
        moved += rotate_remove_consent(inst, consent) != gs_student(inst);
    }
    std::ostringstream d;
    d << insts.size() << " instances, " << bad << " failing (" << wider << " with legal set wider than stable set, "
      << moved << " with EADAM differing from GS), " << seconds_since(t0) << " s";
    if (bad) d << "; first: " << first;
    return {bad == 0, d.str()};
}

// Criterion 3.
Verdict rotation_laws(const std::vector<Instance>& insts) {
    auto t0 = Clock::now();
    int bad = 0;
    std::string first;
    for (const auto& inst : insts) {
        auto err = check_rotation_laws(inst);
        if (!err.empty() && bad++ == 0) first = err;
    }
    std::ostringstream d;
    d << insts.size() << " instances, " << bad << " failing, " << seconds_since(t0) << " s";
    if (bad) d << "; first: " << first;
    return {bad == 0, d.str()};
}

double fit_exponent(const std::vector<std::pair<double, double>>& xy) {
    double n = static_cast<double>(xy.size()), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : xy) {
        double lx = std::log(x), ly = std::log(y);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// Criterion 4.
Verdict linearity() {
    auto t0 = Clock::now();
    const std::vector<Mechanism> mechs{Mechanism::Gs, Mechanism::LegalStudentOpt, Mechanism::LegalSchoolOpt,
                                       Mechanism::LegalSubgraph, Mechanism::EadamFast};
    std::vector<BenchCell> plan;
    for (int n : {500, 1000, 2000, 4000}) {
        BenchCell cell;
        cell.config.n_students = n;
        cell.config.n_schools = n / 100;
        cell.config.seed = 1000 + n;
        cell.mechanisms = mechs;
        cell.repetitions = kLinearityReps;
        plan.push_back(cell);
    }
    auto recs = run_bench(plan);
    std::map<std::string, std::vector<std::pair<double, double>>> pts;
    std::int64_t cap_violations = 0;
    double worst_ratio = 0;
    for (const auto& r : recs) {
        pts[r.mechanism].emplace_back(static_cast<double>(r.n_edges), static_cast<double>(r.counters.edge_scans));
        worst_ratio = std::max(worst_ratio, static_cast<double>(r.counters.edge_scans) / r.n_edges);
        if (r.counters.edge_scans > kScanFactor * r.n_edges) ++cap_violations;
    }
    bool pass = cap_violations == 0;
    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(3);
    d << "exponents";
    for (auto& [mech, xy] : pts) {
        double e = fit_exponent(xy);
        pass = pass && e >= kExponentLo && e <= kExponentHi;
        d << ' ' << mech << '=' << e;
    }
    d << " (allowed [" << kExponentLo << ", " << kExponentHi << "]); max scans/|E| " << worst_ratio << " (cap "
      << kScanFactor << "), " << cap_violations << " over cap; " << seconds_since(t0) << " s";
    return {pass, d.str()};
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    std::size_t n = v.size();
    return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Criterion 5.
Verdict relative_speed() {
    auto t0 = Clock::now();
    std::vector<double> gs, fast, simplified;
    bool equal = true;
    for (int i = 0; i < kSpeedInstances; ++i) {
        GenConfig cfg;
        cfg.n_students = 10000;
        cfg.n_schools = 100;
        cfg.seed = 5000 + i;
        auto inst = gen_complete(cfg);
        auto all = ConsentSet::all(inst);
        auto g = run_mechanism(Mechanism::Gs, inst, all);
        auto f = run_mechanism(Mechanism::EadamFast, inst, all);
        auto s = run_mechanism(Mechanism::EadamSimplified, inst, all);
        equal = equal && f.assignment == s.assignment;
        gs.push_back(g.wall_ms);
        fast.push_back(f.wall_ms);
        simplified.push_back(s.wall_ms);
    }
    double mg = median(gs), mf = median(fast), ms = median(simplified);
    bool pass = equal && mf <= kFastVsSimplified * ms && mf <= kFastVsGs * mg;
    std::ostringstream d;
    d.setf(std::ios::fixed);
    d.precision(2);
    d << "median ms: gs " << mg << ", eadam-fast " << mf << ", eadam-simplified " << ms << "; fast/simplified "
      << mf / ms << " (max " << kFastVsSimplified << "), fast/gs " << mf / mg << " (max " << kFastVsGs << ")"
      << (equal ? "" : "; OUTPUTS DIFFER") << "; " << seconds_since(t0) << " s";
    return {pass, d.str()};
}

// Criterion 6.
Verdict order_robustness() {
    auto t0 = Clock::now();
    SplitMix64 rng(606);
    int bad = 0, varied = 0;
    std::string first;
    for (int i = 0; i < kRobustInstances; ++i) {
        auto inst = random_small(rng, 7, 3, 2);
        auto consent = random_consent(rng, inst);
        const std::uint64_t seed = rng.next();
        auto err = check_order_robustness(inst, consent, kRobustRuns, seed);
        if (!err.empty() && bad++ == 0) first = err;
        // Coverage: does the shuffle actually change the execution?
        auto ref = rotate_remove(inst, Side::Schools);
        SplitMix64 probe(seed);
        for (int k = 0; k < kRobustRuns; ++k) {
            RotateRemoveOptions o;
            o.seed = probe.next();
            o.naive = k % 2 == 0;
            auto r = rotate_remove(inst, Side::Schools, o);
            if (r.removed != ref.removed || r.rotations != ref.rotations) {
                ++varied;
                break;
            }
        }
    }
    std::ostringstream d;
    d << kRobustInstances << " instances x " << kRobustRuns << " shuffled runs, " << bad << " failing ("
      << varied << " with a varying execution order), " << seconds_since(t0) << " s";
    if (bad) d << "; first: " << first;
    return {bad == 0, d.str()};
}

}  // namespace

int main() {
    auto insts = property_instances();
    const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
        {"1 golden examples", golden_examples},
        {"2 oracle equivalence", [&] { return oracle_equivalence(insts); }},
        {"3 rotation laws", [&] { return rotation_laws(insts); }},
        {"4 linearity", linearity},
        {"5 relative speed", relative_speed},
        {"6 order robustness", order_robustness},
    };
    bool all = true;
    for (const auto& [name, run] : criteria) {
        Verdict o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        all = all && o.pass;
        std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << name << ": " << o.detail << std::endl;
    }
    return all ? 0 : 1;
}
