#include "schoolchoice/rotate_remove.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "path_engine.hpp"
#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/random.hpp"

namespace schoolchoice {

namespace {

// Rebuilds the whole digraph at every step. Differential twin of the path
// engine; also the only place where the case choice can be fully random.
RotateRemoveResult rotate_remove_naive(const Instance& inst, Side side,
                                       const RotateRemoveOptions& opt) {
    RotateRemoveResult res;
    DaCounters gs;
    Assignment m = side == Side::Schools ? gs_student(inst, &gs) : gs_school(inst, &gs);
    res.counters.proposals = gs.proposals;
    res.counters.edge_scans = gs.scans;
    EdgeMask mask(inst);
    std::optional<SplitMix64> rng;
    if (opt.seed) rng.emplace(*opt.seed);

    for (;;) {
        auto d = build_rotation_digraph(inst, m, side, &mask);
        std::vector<std::pair<int, int>> sink_arcs;  // (x', y)
        for (int x = 0; x < static_cast<int>(d.x_out.size()); ++x) {
            int y = d.x_out[x];
            if (y == kNone) continue;
            int nx = d.y_out[y];
            if (nx == RotationDigraph::kEmpty || d.x_out[nx] == kNone) sink_arcs.emplace_back(x, y);
        }
        auto cycles = exposed_rotations(inst, d);
        const std::size_t total = sink_arcs.size() + cycles.size();
        if (total == 0) break;
        std::size_t pick = rng ? rng->below(total) : 0;
        if (pick < sink_arcs.size()) {
            auto [x, y] = sink_arcs[pick];
            StudentId a = side == Side::Students ? x : y;
            SchoolId b = side == Side::Students ? y : x;
            mask.remove_edge(inst, a, b);
            res.removed.emplace_back(a, b);
            ++res.counters.edges_removed;
            if (opt.consenting && side == Side::Schools && !(*opt.consenting)[a]) {
                auto list = inst.school_list(b);
                auto cross = inst.school_cross(b);
                for (int p = *inst.school_rank(b, a) + 1; p < static_cast<int>(list.size()); ++p)
                    if (mask.remove(inst.student_cell(list[p], cross[p])))
                        ++res.counters.edges_removed;
            }
        } else {
            const Rotation& rho = cycles[pick - sink_arcs.size()];
            m = eliminate_unchecked(m, rho);
            res.rotations.push_back(rho);
        }
    }
    res.assignment = std::move(m);
    return res;
}

}  // namespace

RotateRemoveResult rotate_remove(const Instance& inst, Side side, const RotateRemoveOptions& opt) {
    if (opt.consenting && side != Side::Schools)
        throw std::invalid_argument("consent applies to school-side rotate-remove only");
    if (opt.consenting && static_cast<int>(opt.consenting->size()) != inst.num_students())
        throw std::invalid_argument("consent vector size does not match the instance");
    if (opt.naive) return rotate_remove_naive(inst, side, opt);

    PathEngineOptions po;
    po.side = side;
    po.mode = PathEngineMode::RotateRemove;
    po.consenting = opt.consenting;
    po.shuffle_seed = opt.seed;
    po.check_invariants = opt.check_invariants;
    auto r = run_path_engine(inst, po);

    RotateRemoveResult res;
    res.assignment = std::move(r.assignment);
    res.removed = std::move(r.removed);
    res.rotations = std::move(r.rotations);
    res.counters.edge_scans = r.edge_scans + r.gs.scans;
    res.counters.path_extensions = r.path_extensions;
    res.counters.rescans = r.rescans;
    res.counters.proposals = r.gs.proposals;
    res.counters.edges_removed = static_cast<std::int64_t>(res.removed.size()) + r.cascade_removed;
    return res;
}

Assignment student_optimal_legal(const Instance& inst) {
    return rotate_remove(inst, Side::Schools).assignment;
}

Assignment school_optimal_legal(const Instance& inst) {
    return rotate_remove(inst, Side::Students).assignment;
}

const char* removal_reason_name(RemovalReason r) {
    switch (r) {
        case RemovalReason::StudentRotateRemove: return "student-rotate-remove";
        case RemovalReason::SchoolRotateRemove: return "school-rotate-remove";
        case RemovalReason::NotOnLegalRotation: return "not-on-legal-rotation";
    }
    return "?";
}

LegalSubinstanceReport legal_subinstance(const Instance& inst) {
    LegalSubinstanceReport rep;
    auto student_side = rotate_remove(inst, Side::Students);
    auto school_side = rotate_remove(inst, Side::Schools);
    RotationCounters rc;
    rep.r2 = all_rotations(inst, Side::Students, &rc);
    rep.r3 = student_side.rotations;
    for (const auto& rho : school_side.rotations) rep.r1.push_back(sigma_inverse(rho));
    rep.student_optimal_legal = school_side.assignment;
    rep.school_optimal_legal = student_side.assignment;
    rep.edge_scans = student_side.counters.edge_scans + school_side.counters.edge_scans + rc.edge_scans;
    rep.proposals = student_side.counters.proposals + school_side.counters.proposals + rc.proposals;

    // Every legal edge is either in the student-optimal legal assignment or
    // gained by a student along one of the eliminations towards the
    // school-optimal one.
    std::set<std::pair<StudentId, SchoolId>> legal;
    for (auto e : rep.student_optimal_legal.edges()) legal.insert(e);
    for (const auto* rs : {&rep.r1, &rep.r2, &rep.r3})
        for (const auto& rho : *rs)
            for (std::size_t i = 0; i < rho.pairs.size(); ++i)
                legal.emplace(rho.pairs[i].first, rho.pairs[(i + 1) % rho.pairs.size()].second);

    std::map<std::pair<StudentId, SchoolId>, RemovalReason> reason;
    for (auto e : school_side.removed) reason.emplace(e, RemovalReason::SchoolRotateRemove);
    for (auto e : student_side.removed) reason.emplace(e, RemovalReason::StudentRotateRemove);

    for (int a = 0; a < inst.num_students(); ++a)
        for (SchoolId b : inst.student_list(a)) {
            if (legal.count({a, b})) {
                rep.legal_edges.emplace_back(a, b);
                continue;
            }
            auto it = reason.find({a, b});
            rep.illegal_edges.push_back(
                {a, b, it == reason.end() ? RemovalReason::NotOnLegalRotation : it->second});
        }
    return rep;
}

EdgeMask LegalSubinstanceReport::mask(const Instance& inst) const {
    EdgeMask m(inst);
    for (const auto& e : illegal_edges) m.remove_edge(inst, e.student, e.school);
    return m;
}

std::string format_legal_report(const Instance& inst, const LegalSubinstanceReport& r) {
    std::ostringstream os;
    os << "legal_edges:\n";
    for (auto [a, b] : r.legal_edges) os << inst.student_name(a) << ' ' << inst.school_name(b) << '\n';
    os << "illegal_edges:\n";
    for (const auto& e : r.illegal_edges)
        os << inst.student_name(e.student) << ' ' << inst.school_name(e.school) << ' '
           << removal_reason_name(e.reason) << '\n';
    os << "student_optimal_legal:\n" << format_assignment(inst, r.student_optimal_legal);
    os << "school_optimal_legal:\n" << format_assignment(inst, r.school_optimal_legal);
    return os.str();
}

}  // namespace schoolchoice
