#include "schoolchoice/oracle.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace schoolchoice {

EnumerationCapExceeded::EnumerationCapExceeded(double estimate_, std::int64_t cap_)
    : std::runtime_error([&] {
          std::ostringstream os;
          os << "enumeration refused: up to " << estimate_ << " assignments, cap is " << cap_;
          return os.str();
      }()),
      estimate(estimate_),
      cap(cap_) {}

double assignment_count_bound(const Instance& inst) {
    double p = 1;
    for (int a = 0; a < inst.num_students(); ++a) p *= inst.student_degree(a) + 1;
    return p;
}

bool is_maximal(const Instance& inst, const Assignment& m) {
    std::vector<int> load(inst.num_schools(), 0);
    for (int a = 0; a < inst.num_students(); ++a)
        if (m[a] != kNone) ++load[m[a]];
    for (int a = 0; a < inst.num_students(); ++a) {
        if (m[a] != kNone) continue;
        for (SchoolId b : inst.student_list(a))
            if (load[b] < inst.quota(b)) return false;
    }
    return true;
}

std::vector<Assignment> enumerate_assignments(const Instance& inst, std::int64_t cap,
                                              bool maximal_only) {
    const int na = inst.num_students();
    std::vector<Assignment> out;
    std::vector<SchoolId> cur(na, kNone);
    std::vector<int> load(inst.num_schools(), 0);
    std::int64_t produced = 0;
    auto rec = [&](auto& self, int a) -> void {
        if (a == na) {
            if (++produced > cap) throw EnumerationCapExceeded(assignment_count_bound(inst), cap);
            Assignment m(cur);
            if (!maximal_only || is_maximal(inst, m)) out.push_back(std::move(m));
            return;
        }
        cur[a] = kNone;
        self(self, a + 1);
        for (SchoolId b : inst.student_list(a)) {
            if (load[b] == inst.quota(b)) continue;
            ++load[b];
            cur[a] = b;
            self(self, a + 1);
            --load[b];
        }
        cur[a] = kNone;
    };
    rec(rec, 0);
    return out;
}

std::vector<Assignment> enumerate_stable(const Instance& inst, std::int64_t cap) {
    const int na = inst.num_students();
    const int nb = inst.num_schools();
    std::vector<Assignment> out;
    std::vector<SchoolId> cur(na, kNone);
    std::vector<std::vector<StudentId>> members(nb);
    std::int64_t nodes = 0;

    // Rank of a school's worst member among students assigned so far.
    auto worst_pos = [&](SchoolId b) {
        int w = -1;
        for (StudentId s : members[b]) w = std::max(w, *inst.school_rank(b, s));
        return w;
    };
    // A school keeps every member it has now, so a member ranked below x
    // makes (x, b) block for good if x ends up below b.
    auto permanently_blocked = [&](StudentId x, SchoolId c) {
        auto list = inst.student_list(x);
        auto cross = inst.student_cross(x);
        for (int i = 0; i < static_cast<int>(list.size()) && list[i] != c; ++i)
            if (worst_pos(list[i]) > cross[i]) return true;
        if (c == kNone) return false;
        auto bl = inst.school_list(c);
        int rx = *inst.school_rank(c, x);
        for (int i = 0; i < rx; ++i) {
            StudentId y = bl[i];
            if (y < x && inst.student_prefers(y, c, cur[y])) return true;
        }
        return false;
    };

    auto rec = [&](auto& self, int a) -> void {
        if (++nodes > cap) throw EnumerationCapExceeded(assignment_count_bound(inst), cap);
        if (a == na) {
            Assignment m(cur);
            if (is_stable(inst, m)) out.push_back(std::move(m));
            return;
        }
        if (!permanently_blocked(a, kNone)) {
            cur[a] = kNone;
            self(self, a + 1);
        }
        for (SchoolId b : inst.student_list(a)) {
            if (static_cast<int>(members[b].size()) == inst.quota(b)) continue;
            if (permanently_blocked(a, b)) continue;
            cur[a] = b;
            members[b].push_back(a);
            self(self, a + 1);
            members[b].pop_back();
        }
        cur[a] = kNone;
    };
    rec(rec, 0);
    return out;
}

namespace {

// Edge and blocking-edge bitsets of every assignment, over student cells.
struct BitTable {
    std::size_t words = 0;
    std::vector<std::uint64_t> edges;     // n * words
    std::vector<std::uint64_t> blocking;  // n * words

    const std::uint64_t* e(std::size_t i) const { return edges.data() + i * words; }
    const std::uint64_t* b(std::size_t i) const { return blocking.data() + i * words; }
};

BitTable bit_table(const Instance& inst, const std::vector<Assignment>& all) {
    BitTable t;
    t.words = static_cast<std::size_t>((inst.num_edges() + 63) / 64);
    if (t.words == 0) t.words = 1;
    t.edges.assign(all.size() * t.words, 0);
    t.blocking.assign(all.size() * t.words, 0);
    auto set = [&](std::vector<std::uint64_t>& v, std::size_t i, std::int64_t cell) {
        v[i * t.words + cell / 64] |= std::uint64_t{1} << (cell % 64);
    };
    for (std::size_t i = 0; i < all.size(); ++i) {
        for (auto [a, b] : all[i].edges())
            set(t.edges, i, inst.student_cell(a, *inst.student_rank(a, b)));
        for (auto [a, b] : blocking_pairs(inst, all[i]))
            set(t.blocking, i, inst.student_cell(a, *inst.student_rank(a, b)));
    }
    return t;
}

std::vector<std::uint64_t> union_of(const BitTable& t, const std::vector<char>& in) {
    std::vector<std::uint64_t> u(t.words, 0);
    for (std::size_t i = 0; i < in.size(); ++i)
        if (in[i])
            for (std::size_t w = 0; w < t.words; ++w) u[w] |= t.e(i)[w];
    return u;
}

bool intersects(const std::uint64_t* x, const std::vector<std::uint64_t>& y) {
    for (std::size_t w = 0; w < y.size(); ++w)
        if (x[w] & y[w]) return true;
    return false;
}

std::vector<Assignment> select(const std::vector<Assignment>& all, const std::vector<char>& in) {
    std::vector<Assignment> out;
    for (std::size_t i = 0; i < all.size(); ++i)
        if (in[i]) out.push_back(all[i]);
    return out;
}

}  // namespace

LegalFixedPoint legal_fixed_point(const Instance& inst, std::int64_t cap) {
    auto all = enumerate_assignments(inst, cap);
    auto t = bit_table(inst, all);
    const std::size_t n = all.size();
    std::vector<char> cur(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        bool stable = true;
        for (std::size_t w = 0; w < t.words; ++w) stable = stable && t.b(i)[w] == 0;
        cur[i] = stable;
    }
    LegalFixedPoint res;
    res.trace.push_back(select(all, cur));
    for (;;) {
        // L' = M \ I(M \ I(L)), where I(S) is everything blocked by an edge of S.
        auto u = union_of(t, cur);
        std::vector<char> outside(n);
        for (std::size_t i = 0; i < n; ++i) outside[i] = !intersects(t.b(i), u);
        auto u2 = union_of(t, outside);
        std::vector<char> next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = !intersects(t.b(i), u2);
        res.trace.push_back(select(all, next));
        if (next == cur) break;
        cur = std::move(next);
    }
    res.legal = res.trace.back();
    return res;
}

LegalVerdict verify_legal_property(const Instance& inst, const std::vector<Assignment>& candidate,
                                   std::int64_t cap) {
    auto all = enumerate_assignments(inst, cap);
    auto t = bit_table(inst, all);
    std::map<Assignment, std::size_t> index;
    for (std::size_t i = 0; i < all.size(); ++i) index.emplace(all[i], i);
    std::vector<char> in(all.size(), 0);
    for (const auto& m : candidate) {
        auto it = index.find(m);
        if (it == index.end()) throw InvalidInput("candidate is not an assignment of the instance");
        in[it->second] = 1;
    }
    auto u = union_of(t, in);
    LegalVerdict v;
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (!in[i] || !intersects(t.b(i), u)) continue;
        v.ok = false;
        v.failure = LegalVerdict::Failure::Internal;
        v.blocked = all[i];
        for (std::size_t j = 0; j < all.size(); ++j)
            if (in[j] && blocks(inst, all[j], all[i])) {
                v.blocker = all[j];
                break;
            }
        return v;
    }
    for (std::size_t i = 0; i < all.size(); ++i) {
        if (in[i] || intersects(t.b(i), u)) continue;
        v.ok = false;
        v.failure = LegalVerdict::Failure::External;
        v.blocked = all[i];
        return v;
    }
    return v;
}

BlockingDigraph build_blocking_digraph(const Instance& inst, std::int64_t cap, bool maximal_only) {
    BlockingDigraph g;
    g.nodes = enumerate_assignments(inst, cap, maximal_only);
    auto t = bit_table(inst, g.nodes);
    for (std::size_t u = 0; u < g.nodes.size(); ++u) {
        std::vector<std::uint64_t> eu(t.e(u), t.e(u) + t.words);
        for (std::size_t v = 0; v < g.nodes.size(); ++v)
            if (intersects(t.b(v), eu)) g.arcs.emplace_back(static_cast<int>(u), static_cast<int>(v));
    }
    return g;
}

}  // namespace schoolchoice
