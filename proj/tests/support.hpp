#pragma once

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "schoolchoice/eadam.hpp"
#include "schoolchoice/instance.hpp"
#include "schoolchoice/random.hpp"

namespace testsupport {

using namespace schoolchoice;

inline std::string fixture_path(const std::string& name) { return std::string(FIXTURE_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Instance fixture(const std::string& name) { return parse_instance(read_text(fixture_path(name))); }

inline Assignment named(const Instance& inst, std::vector<std::pair<std::string, std::string>> pairs) {
    return assignment_from_names(inst, pairs);
}

// Small instance with incomplete lists: each student lists each school with
// probability 3/4, in random order; schools rank their applicants randomly.
inline Instance random_small(SplitMix64& rng, int max_students = 7, int max_schools = 3, int max_quota = 2) {
    int n = static_cast<int>(rng.range(1, max_students));
    int m = static_cast<int>(rng.range(1, max_schools));
    std::vector<std::string> sn, bn;
    for (int i = 1; i <= n; ++i) sn.push_back("a" + std::to_string(i));
    for (int i = 1; i <= m; ++i) bn.push_back("b" + std::to_string(i));
    std::vector<int> q(m);
    for (auto& x : q) x = static_cast<int>(rng.range(1, max_quota));
    std::vector<std::vector<SchoolId>> sp(n);
    std::vector<std::vector<StudentId>> bp(m);
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < m; ++b)
            if (rng.below(4) != 0) sp[a].push_back(b);
        rng.shuffle(sp[a]);
        for (SchoolId b : sp[a]) bp[b].push_back(a);
    }
    for (auto& l : bp) rng.shuffle(l);
    return Instance::from_lists(sn, bn, q, sp, bp);
}

inline ConsentSet random_consent(SplitMix64& rng, const Instance& inst) {
    ConsentSet c = ConsentSet::none(inst);
    for (int a = 0; a < inst.num_students(); ++a) c.set(a, rng.below(2) == 0);
    return c;
}

inline std::vector<Assignment> sorted(std::vector<Assignment> v) {
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace testsupport
