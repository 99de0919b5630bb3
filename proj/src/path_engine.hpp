#pragma once

// Path-following driver for rotation elimination. Used by rotate-remove
// (with edge removal at sinks), its consent variant, and rotation
// enumeration (no removal).

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "schoolchoice/deferred_acceptance.hpp"
#include "schoolchoice/instance.hpp"
#include "schoolchoice/rotations.hpp"

namespace schoolchoice {

enum class PathEngineMode {
    RotateRemove,  // start at the Y-optimal assignment, delete arcs into sinks
    Enumerate,     // start at the X-optimal assignment, never delete
};

struct PathEngineOptions {
    Side side = Side::Schools;
    PathEngineMode mode = PathEngineMode::RotateRemove;
    // Per student; only meaningful for Side::Schools in RotateRemove mode.
    const std::vector<char>* consenting = nullptr;
    // Restart order over X; identity when absent.
    std::optional<std::uint64_t> shuffle_seed;
    // Verify the scan-position invariant after every step (slow).
    bool check_invariants = false;
};

struct PathEngineResult {
    Assignment assignment;
    std::vector<Rotation> rotations;
    // Arcs into sinks deleted by the algorithm, as (student, school).
    std::vector<std::pair<StudentId, SchoolId>> removed;
    // Edges skipped because a nonconsenting student fixed a school.
    std::int64_t cascade_removed = 0;
    std::int64_t edge_scans = 0;
    std::int64_t path_extensions = 0;
    std::int64_t rescans = 0;
    DaCounters gs;
};

PathEngineResult run_path_engine(const Instance& inst, const PathEngineOptions& opt);

}  // namespace schoolchoice
