#include "schoolchoice/eadam.hpp"

#include <algorithm>
#include <sstream>

#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/rotate_remove.hpp"

namespace schoolchoice {

ConsentSet ConsentSet::parse(const Instance& inst, std::string_view text) {
    ConsentSet c = none(inst);
    std::istringstream is{std::string(text)};
    std::string line;
    while (std::getline(is, line)) {
        if (auto h = line.find('#'); h != std::string::npos) line.resize(h);
        std::istringstream ls(line);
        std::string name;
        while (ls >> name) {
            auto a = inst.find_student(name);
            if (!a) throw InvalidInput("consent: unknown student '" + name + "'");
            c.set(*a, true);
        }
    }
    return c;
}

int ConsentSet::size() const {
    return static_cast<int>(std::count(flags_.begin(), flags_.end(), 1));
}

namespace {

void check_deadline(const Deadline& d) {
    if (d && std::chrono::steady_clock::now() > *d) throw MechanismTimeout("mechanism timed out");
}

void check_consent(const Instance& inst, const ConsentSet& c) {
    if (static_cast<int>(c.flags().size()) != inst.num_students())
        throw InvalidInput("consent set size does not match the instance");
}

}  // namespace

Assignment kesten_eadam(const Instance& inst, const ConsentSet& consent, EadamStats* stats,
                        Deadline deadline) {
    check_consent(inst, consent);
    EadamStats local;
    EadamStats& st = stats ? *stats : local;
    EdgeMask mask(inst);
    for (;;) {
        check_deadline(deadline);
        auto run = gs_student_traced(inst, &mask);
        ++st.gs_reruns;
        for (const auto& e : run.trace.events)
            if (e.outcome != Outcome::Displaced) ++st.proposals;
        st.edge_scans += static_cast<std::int64_t>(run.trace.events.size());
        auto pairs = interrupting_pairs(run.trace);
        int step = 0;
        for (const auto& p : pairs)
            if (consent.contains(p.student)) {
                step = p.step;  // pairs are sorted by step, latest first
                break;
            }
        if (step == 0) return std::move(run.assignment);
        for (const auto& p : pairs)
            if (p.step == step && consent.contains(p.student)) {
                mask.remove_edge(inst, p.student, p.school);
                ++st.edges_removed;
            }
    }
}

std::vector<SchoolId> underdemanded_schools(const Instance& inst, const Assignment& m,
                                            const EdgeMask* mask) {
    std::vector<char> demanded(inst.num_schools(), 0);
    for (int a = 0; a < inst.num_students(); ++a) {
        auto list = inst.student_list(a);
        for (int i = 0; i < static_cast<int>(list.size()) && list[i] != m[a]; ++i)
            if (!mask || mask->alive(inst, a, i)) demanded[list[i]] = 1;
    }
    std::vector<SchoolId> out;
    for (int b = 0; b < inst.num_schools(); ++b)
        if (!demanded[b]) out.push_back(b);
    return out;
}

Assignment simplified_eadam(const Instance& inst, const ConsentSet& consent, EadamStats* stats,
                            Deadline deadline) {
    check_consent(inst, consent);
    EadamStats local;
    EadamStats& st = stats ? *stats : local;
    EdgeMask mask(inst);
    // Every round but the last removes an edge.
    const std::int64_t max_rounds = inst.num_edges() + 2;
    for (std::int64_t round = 0; round < max_rounds; ++round) {
        check_deadline(deadline);
        DaCounters dc;
        Assignment m = gs_student(inst, &dc, &mask);
        ++st.gs_reruns;
        st.proposals += dc.proposals;
        st.edge_scans += dc.scans;
        auto under = underdemanded_schools(inst, m, &mask);
        st.edge_scans += inst.num_edges();
        if (static_cast<int>(under.size()) == inst.num_schools()) return m;
        std::vector<char> is_under(inst.num_schools(), 0);
        for (SchoolId b : under) is_under[b] = 1;
        bool removed_any = false;
        for (int a = 0; a < inst.num_students(); ++a) {
            // Being unassigned counts as an underdemanded outside option.
            if (m[a] != kNone && !is_under[m[a]]) continue;
            auto list = inst.student_list(a);
            auto cross = inst.student_cross(a);
            for (int i = 0; i < static_cast<int>(list.size()) && list[i] != m[a]; ++i) {
                if (!mask.remove(inst.student_cell(a, i))) continue;
                removed_any = true;
                ++st.edges_removed;
                if (consent.contains(a)) continue;
                SchoolId b = list[i];
                auto bl = inst.school_list(b);
                auto bc = inst.school_cross(b);
                for (int p = cross[i] + 1; p < static_cast<int>(bl.size()); ++p)
                    if (mask.remove(inst.student_cell(bl[p], bc[p]))) ++st.edges_removed;
            }
        }
        if (!removed_any) return m;
    }
    throw std::logic_error("simplified EADAM did not converge");
}

Assignment rotate_remove_consent(const Instance& inst, const ConsentSet& consent, EadamStats* stats,
                                 const ConsentRunOptions& opt) {
    check_consent(inst, consent);
    RotateRemoveOptions ro;
    ro.consenting = &consent.flags();
    ro.naive = opt.naive;
    ro.seed = opt.seed;
    ro.check_invariants = opt.check_invariants;
    auto r = rotate_remove(inst, Side::Schools, ro);
    if (stats) {
        stats->gs_reruns += 1;
        stats->proposals += r.counters.proposals;
        stats->edge_scans += r.counters.edge_scans;
        stats->edges_removed += r.counters.edges_removed;
        stats->rotations_eliminated += static_cast<std::int64_t>(r.rotations.size());
    }
    return std::move(r.assignment);
}

bool respects_nonconsenting(const Instance& inst, const ConsentSet& consent, const Assignment& m) {
    for (auto [a, b] : blocking_pairs(inst, m))
        if (!consent.contains(a)) return false;
    return true;
}

bool is_constrained_efficient(const Instance& inst, const ConsentSet& consent, const Assignment& m,
                              std::int64_t cap) {
    check_consent(inst, consent);
    validate_assignment(inst, m);
    if (!respects_nonconsenting(inst, consent, m)) return false;
    for (const auto& other : enumerate_assignments(inst, cap)) {
        if (other == m || !dominates(inst, other, m)) continue;
        if (respects_nonconsenting(inst, consent, other)) return false;
    }
    return true;
}

}  // namespace schoolchoice
