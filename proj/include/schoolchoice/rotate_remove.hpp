#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "schoolchoice/instance.hpp"
#include "schoolchoice/rotations.hpp"

namespace schoolchoice {

struct RotateRemoveOptions {
    // Per student consent flags; school side only. Null means everyone consents.
    const std::vector<char>* consenting = nullptr;
    // Rebuild the full digraph every step instead of following a path.
    bool naive = false;
    // Randomizes the order of choices: restart order on the fast path,
    // the pick among all available sink arcs and cycles on the naive path.
    std::optional<std::uint64_t> seed;
    bool check_invariants = false;
};

struct RotateRemoveCounters {
    std::int64_t edge_scans = 0;  // includes the initial deferred acceptance
    std::int64_t path_extensions = 0;
    std::int64_t rescans = 0;
    std::int64_t proposals = 0;
    std::int64_t edges_removed = 0;  // arcs into sinks plus consent cascades
};

struct RotateRemoveResult {
    Assignment assignment;
    std::vector<std::pair<StudentId, SchoolId>> removed;
    std::vector<Rotation> rotations;
    RotateRemoveCounters counters;
};

// X-rotate-remove: returns the Y-optimal legal assignment (X = schools
// gives the student-optimal one).
RotateRemoveResult rotate_remove(const Instance& inst, Side side,
                                 const RotateRemoveOptions& opt = {});

Assignment student_optimal_legal(const Instance& inst);
Assignment school_optimal_legal(const Instance& inst);

enum class RemovalReason { StudentRotateRemove, SchoolRotateRemove, NotOnLegalRotation };
const char* removal_reason_name(RemovalReason r);

struct IllegalEdge {
    StudentId student;
    SchoolId school;
    RemovalReason reason;
};

struct LegalSubinstanceReport {
    std::vector<std::pair<StudentId, SchoolId>> legal_edges;  // student order, list order
    std::vector<IllegalEdge> illegal_edges;
    Assignment student_optimal_legal;
    Assignment school_optimal_legal;
    std::vector<Rotation> r1;  // student rotations from the student-optimal legal to M_0
    std::vector<Rotation> r2;  // from M_0 to M_z
    std::vector<Rotation> r3;  // from M_z to the school-optimal legal
    std::int64_t edge_scans = 0;
    std::int64_t proposals = 0;

    EdgeMask mask(const Instance& inst) const;
};

LegalSubinstanceReport legal_subinstance(const Instance& inst);

std::string format_legal_report(const Instance& inst, const LegalSubinstanceReport& r);

}  // namespace schoolchoice
