#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "schoolchoice/instance.hpp"

namespace schoolchoice {

struct DaCounters {
    std::int64_t proposals = 0;
    // Preference cells visited: proposals, dead cells skipped, and moves of
    // the least-preferred pointers.
    std::int64_t scans = 0;
};

// Student-proposing deferred acceptance; the student-optimal stable
// assignment of the (optionally masked) instance.
Assignment gs_student(const Instance& inst, DaCounters* counters = nullptr,
                      const EdgeMask* mask = nullptr);

// School-proposing deferred acceptance; the school-optimal stable assignment.
Assignment gs_school(const Instance& inst, DaCounters* counters = nullptr,
                     const EdgeMask* mask = nullptr);

enum class Outcome { Accepted, Rejected, Displaced };

struct TraceEvent {
    int round;  // 1-based
    StudentId student;
    SchoolId school;
    Outcome outcome;
};

// Events in round order. Within a round, schools appear in index order and
// each school's events follow its preference order.
struct GsTrace {
    std::vector<TraceEvent> events;
    int num_rounds = 0;
};

struct TracedResult {
    Assignment assignment;
    GsTrace trace;
};

// Round-based student-proposing deferred acceptance: every free student with
// list left proposes at once, then every school keeps its q_b best.
TracedResult gs_student_traced(const Instance& inst, const EdgeMask* mask = nullptr);

struct InterruptingPair {
    StudentId student;
    SchoolId school;
    int step;  // round in which the student was displaced

    friend bool operator==(const InterruptingPair&, const InterruptingPair&) = default;
};

// Sorted by step descending, then student, then school.
std::vector<InterruptingPair> interrupting_pairs(const GsTrace& trace);

std::string format_trace(const Instance& inst, const GsTrace& trace);
const char* outcome_name(Outcome o);

}  // namespace schoolchoice
