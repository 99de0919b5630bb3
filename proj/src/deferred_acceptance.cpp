#include "schoolchoice/deferred_acceptance.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace schoolchoice {

Assignment gs_student(const Instance& inst, DaCounters* counters, const EdgeMask* mask) {
    const int na = inst.num_students();
    const int nb = inst.num_schools();
    DaCounters local;
    DaCounters& c = counters ? *counters : local;

    std::vector<int> next(na, 0);
    std::vector<SchoolId> match(na, kNone);
    // held[b][p]: the student at position p of b's list is tentatively held.
    std::vector<std::vector<std::uint8_t>> held(nb);
    std::vector<int> count(nb, 0);
    std::vector<int> worst(nb, 0);  // valid once the school is full
    for (int b = 0; b < nb; ++b) {
        held[b].assign(inst.school_degree(b), 0);
        worst[b] = inst.school_degree(b);
    }
    auto retreat_worst = [&](SchoolId b) {
        int w = worst[b] - 1;
        while (!held[b][w]) {
            --w;
            ++c.scans;
        }
        worst[b] = w;
    };

    std::vector<StudentId> free;
    free.reserve(na);
    for (int a = na - 1; a >= 0; --a) free.push_back(a);

    while (!free.empty()) {
        StudentId a = free.back();
        free.pop_back();
        auto list = inst.student_list(a);
        auto cross = inst.student_cross(a);
        const int deg = static_cast<int>(list.size());
        while (next[a] < deg) {
            int i = next[a]++;
            ++c.scans;
            if (mask && !mask->alive(inst, a, i)) continue;
            ++c.proposals;
            SchoolId b = list[i];
            int r = cross[i];
            if (count[b] < inst.quota(b)) {
                held[b][r] = 1;
                match[a] = b;
                if (++count[b] == inst.quota(b)) retreat_worst(b);
                break;
            }
            if (r < worst[b]) {
                StudentId out = inst.school_list(b)[worst[b]];
                held[b][worst[b]] = 0;
                match[out] = kNone;
                held[b][r] = 1;
                match[a] = b;
                retreat_worst(b);
                free.push_back(out);
                break;
            }
        }
    }
    return Assignment(std::move(match));
}

Assignment gs_school(const Instance& inst, DaCounters* counters, const EdgeMask* mask) {
    const int na = inst.num_students();
    const int nb = inst.num_schools();
    DaCounters local;
    DaCounters& c = counters ? *counters : local;

    std::vector<int> next(nb, 0), holding(nb, 0);
    std::vector<SchoolId> match(na, kNone);
    std::vector<int> match_pos(na, 0);  // position of match[a] in a's list

    std::vector<SchoolId> active;
    for (int b = nb - 1; b >= 0; --b) active.push_back(b);
    while (!active.empty()) {
        SchoolId b = active.back();
        active.pop_back();
        auto list = inst.school_list(b);
        auto cross = inst.school_cross(b);
        const int deg = static_cast<int>(list.size());
        while (holding[b] < inst.quota(b) && next[b] < deg) {
            int i = next[b]++;
            ++c.scans;
            StudentId a = list[i];
            int pa = cross[i];
            if (mask && !mask->alive(inst, a, pa)) continue;
            ++c.proposals;
            if (match[a] == kNone) {
                match[a] = b;
                match_pos[a] = pa;
                ++holding[b];
            } else if (pa < match_pos[a]) {
                SchoolId old = match[a];
                match[a] = b;
                match_pos[a] = pa;
                ++holding[b];
                if (holding[old]-- == inst.quota(old)) active.push_back(old);
            }
        }
    }
    return Assignment(std::move(match));
}

TracedResult gs_student_traced(const Instance& inst, const EdgeMask* mask) {
    const int na = inst.num_students();
    const int nb = inst.num_schools();
    std::vector<int> next(na, 0);
    std::vector<SchoolId> match(na, kNone);
    std::vector<std::vector<StudentId>> held(nb);
    std::vector<std::vector<StudentId>> proposers(nb);
    GsTrace trace;

    for (int round = 1;; ++round) {
        bool any = false;
        for (int a = 0; a < na; ++a) {
            if (match[a] != kNone) continue;
            auto list = inst.student_list(a);
            while (next[a] < static_cast<int>(list.size()) && mask &&
                   !mask->alive(inst, a, next[a]))
                ++next[a];
            if (next[a] >= static_cast<int>(list.size())) continue;
            proposers[list[next[a]++]].push_back(a);
            any = true;
        }
        if (!any) break;
        trace.num_rounds = round;
        for (int b = 0; b < nb; ++b) {
            if (proposers[b].empty()) continue;
            std::vector<std::pair<int, StudentId>> cand;
            for (StudentId a : held[b]) cand.emplace_back(*inst.school_rank(b, a), a);
            for (StudentId a : proposers[b]) cand.emplace_back(*inst.school_rank(b, a), a);
            std::sort(cand.begin(), cand.end());
            std::vector<StudentId> keep;
            for (std::size_t i = 0; i < cand.size(); ++i) {
                StudentId a = cand[i].second;
                bool incumbent = match[a] == b;
                bool kept = static_cast<int>(i) < inst.quota(b);
                if (kept) {
                    keep.push_back(a);
                    if (!incumbent) {
                        match[a] = b;
                        trace.events.push_back({round, a, b, Outcome::Accepted});
                    }
                } else if (incumbent) {
                    match[a] = kNone;
                    trace.events.push_back({round, a, b, Outcome::Displaced});
                } else {
                    trace.events.push_back({round, a, b, Outcome::Rejected});
                }
            }
            held[b] = std::move(keep);
            proposers[b].clear();
        }
    }
    return {Assignment(std::move(match)), std::move(trace)};
}

std::vector<InterruptingPair> interrupting_pairs(const GsTrace& trace) {
    std::map<std::pair<StudentId, SchoolId>, int> accepted;
    std::map<SchoolId, std::vector<int>> rejections;  // rounds, ascending
    for (const auto& e : trace.events) {
        if (e.outcome == Outcome::Accepted)
            accepted[{e.student, e.school}] = e.round;
        else
            rejections[e.school].push_back(e.round);
    }
    std::vector<InterruptingPair> out;
    for (const auto& e : trace.events) {
        if (e.outcome != Outcome::Displaced) continue;
        int k = accepted.at({e.student, e.school});
        const auto& rounds = rejections[e.school];
        auto it = std::lower_bound(rounds.begin(), rounds.end(), k);
        if (it != rounds.end() && *it < e.round) out.push_back({e.student, e.school, e.round});
    }
    std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
        if (x.step != y.step) return x.step > y.step;
        if (x.student != y.student) return x.student < y.student;
        return x.school < y.school;
    });
    return out;
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::Accepted: return "accepted";
        case Outcome::Rejected: return "rejected";
        case Outcome::Displaced: return "displaced";
    }
    return "?";
}

std::string format_trace(const Instance& inst, const GsTrace& trace) {
    std::ostringstream os;
    for (const auto& e : trace.events)
        os << e.round << ' ' << inst.student_name(e.student) << ' ' << inst.school_name(e.school)
           << ' ' << outcome_name(e.outcome) << '\n';
    return os.str();
}

}  // namespace schoolchoice
