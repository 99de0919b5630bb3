#include "schoolchoice/rotations.hpp"

#include <algorithm>
#include <stdexcept>

#include "path_engine.hpp"
#include "schoolchoice/deferred_acceptance.hpp"

namespace schoolchoice {

const char* side_name(Side s) { return s == Side::Students ? "students" : "schools"; }

void Rotation::canonicalize() {
    if (pairs.empty()) return;
    auto it = std::min_element(pairs.begin(), pairs.end(),
                               [](const auto& p, const auto& q) { return p.first < q.first; });
    std::rotate(pairs.begin(), it, pairs.end());
}

Rotation Rotation::from_sequence(Side side, const std::vector<int>& ys_xs) {
    if (ys_xs.size() % 2 != 0 || ys_xs.size() < 4)
        throw std::invalid_argument("rotation sequence must alternate y, x with length >= 4");
    Rotation r{side, {}};
    for (std::size_t i = 0; i < ys_xs.size(); i += 2) r.pairs.emplace_back(ys_xs[i + 1], ys_xs[i]);
    r.canonicalize();
    return r;
}

NotStable::NotStable(StudentId a, SchoolId b)
    : std::invalid_argument("assignment is not stable: blocking pair (" + std::to_string(a) + ", " +
                            std::to_string(b) + ")"),
      student(a),
      school(b) {}

namespace {

struct Load {
    std::vector<int> count;
    std::vector<int> worst_pos;  // position in the school's list, -1 if empty
};

Load load_of(const Instance& inst, const Assignment& m) {
    Load l{std::vector<int>(inst.num_schools(), 0), std::vector<int>(inst.num_schools(), -1)};
    for (int a = 0; a < inst.num_students(); ++a) {
        if (m[a] == kNone) continue;
        ++l.count[m[a]];
        l.worst_pos[m[a]] = std::max(l.worst_pos[m[a]], *inst.school_rank(m[a], a));
    }
    return l;
}

std::optional<std::pair<int, int>> successor_with(const Instance& inst, const Assignment& m,
                                                  const Load& load, int x, Side side,
                                                  const EdgeMask* mask) {
    if (side == Side::Students) {
        if (x < 0 || x >= inst.num_students()) throw std::invalid_argument("not a student");
        auto list = inst.student_list(x);
        auto cross = inst.student_cross(x);
        for (int i = 0; i < static_cast<int>(list.size()); ++i) {
            SchoolId b = list[i];
            if (b == m[x] || (mask && !mask->alive(inst, x, i))) continue;
            if (load.count[b] < inst.quota(b) || cross[i] < load.worst_pos[b])
                return std::pair{b, i};
        }
    } else {
        if (x < 0 || x >= inst.num_schools()) throw std::invalid_argument("not a school");
        auto list = inst.school_list(x);
        auto cross = inst.school_cross(x);
        for (int i = 0; i < static_cast<int>(list.size()); ++i) {
            StudentId a = list[i];
            if (m[a] == x || (mask && !mask->alive(inst, a, cross[i]))) continue;
            if (m[a] == kNone || cross[i] < *inst.student_rank(a, m[a])) return std::pair{a, i};
        }
    }
    return std::nullopt;
}

int next_with(const Instance& inst, const Assignment& m, const Load& load, int y, Side side) {
    if (side == Side::Students) {
        if (load.count[y] < inst.quota(y)) return kNone;
        return inst.school_list(y)[load.worst_pos[y]];
    }
    return m[y];
}

void require_stable(const Instance& inst, const Assignment& m, const EdgeMask* mask) {
    validate_assignment(inst, m);
    for (auto [a, b] : blocking_pairs(inst, m)) {
        if (mask && !mask->alive(inst, a, *inst.student_rank(a, b))) continue;
        throw NotStable(a, b);
    }
}

}  // namespace

std::optional<int> successor(const Instance& inst, const Assignment& m, int x, Side side,
                             const EdgeMask* mask) {
    auto s = successor_with(inst, m, load_of(inst, m), x, side, mask);
    if (!s) return std::nullopt;
    return s->first;
}

int next_agent(const Instance& inst, const Assignment& m, int x, Side side, const EdgeMask* mask) {
    auto load = load_of(inst, m);
    auto s = successor_with(inst, m, load, x, side, mask);
    if (!s) throw std::logic_error("next_agent: successor does not exist");
    return next_with(inst, m, load, s->first, side);
}

RotationDigraph build_rotation_digraph(const Instance& inst, const Assignment& m, Side side,
                                       const EdgeMask* mask) {
    require_stable(inst, m, mask);
    auto load = load_of(inst, m);
    const int nx = side == Side::Students ? inst.num_students() : inst.num_schools();
    const int ny = side == Side::Students ? inst.num_schools() : inst.num_students();
    RotationDigraph d;
    d.side = side;
    d.x_out.assign(nx, kNone);
    d.x_out_pos.assign(nx, -1);
    d.y_out.assign(ny, kNone);
    for (int x = 0; x < nx; ++x) {
        auto s = successor_with(inst, m, load, x, side, mask);
        if (!s) continue;
        d.x_out[x] = s->first;
        d.x_out_pos[x] = s->second;
        int nxt = next_with(inst, m, load, s->first, side);
        d.y_out[s->first] = nxt == kNone ? RotationDigraph::kEmpty : nxt;
    }
    return d;
}

std::vector<std::pair<std::string, std::string>> RotationDigraph::arcs(const Instance& inst) const {
    auto xname = [&](int x) {
        return side == Side::Students ? inst.student_name(x) : inst.school_name(x);
    };
    auto yname = [&](int y) {
        return side == Side::Students ? inst.school_name(y) : inst.student_name(y);
    };
    std::vector<std::pair<std::string, std::string>> out;
    for (int x = 0; x < static_cast<int>(x_out.size()); ++x)
        if (x_out[x] != kNone) out.emplace_back(xname(x), yname(x_out[x]));
    for (int y = 0; y < static_cast<int>(y_out.size()); ++y)
        if (y_out[y] != kNone)
            out.emplace_back(yname(y), y_out[y] == kEmpty ? std::string("-") : xname(y_out[y]));
    return out;
}

std::vector<Rotation> exposed_rotations(const Instance&, const RotationDigraph& d) {
    const int nx = static_cast<int>(d.x_out.size());
    auto step = [&](int x) -> int {
        int y = d.x_out[x];
        if (y == kNone) return kNone;
        int n = d.y_out[y];
        return n == RotationDigraph::kEmpty ? kNone : n;
    };
    std::vector<int> color(nx, 0);  // 0 new, 1 on stack, 2 done
    std::vector<Rotation> out;
    for (int s = 0; s < nx; ++s) {
        if (color[s]) continue;
        std::vector<int> walk;
        int x = s;
        while (x != kNone && color[x] == 0) {
            color[x] = 1;
            walk.push_back(x);
            x = step(x);
        }
        if (x != kNone && color[x] == 1) {
            auto it = std::find(walk.begin(), walk.end(), x);
            std::vector<int> cyc(it, walk.end());
            Rotation r{d.side, {}};
            for (std::size_t i = 0; i < cyc.size(); ++i) {
                int prev = cyc[(i + cyc.size() - 1) % cyc.size()];
                r.pairs.emplace_back(cyc[i], d.x_out[prev]);
            }
            r.canonicalize();
            out.push_back(std::move(r));
        }
        for (int w : walk) color[w] = 2;
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Rotation> exposed_rotations(const Instance& inst, const Assignment& m, Side side,
                                        const EdgeMask* mask) {
    return exposed_rotations(inst, build_rotation_digraph(inst, m, side, mask));
}

Assignment eliminate_unchecked(const Assignment& m, const Rotation& rho) {
    Assignment out = m;
    const std::size_t r = rho.pairs.size();
    for (std::size_t i = 0; i < r; ++i) {
        const auto& [x, y] = rho.pairs[i];
        const auto& [xn, yn] = rho.pairs[(i + 1) % r];
        if (rho.side == Side::Students)
            out.assign(x, yn);
        else
            out.assign(yn, x);
    }
    return out;
}

Assignment eliminate(const Instance& inst, const Assignment& m, const Rotation& rho,
                     const EdgeMask* mask) {
    const std::size_t r = rho.pairs.size();
    if (r < 2) throw NotExposed("rotation needs at least two pairs");
    auto d = build_rotation_digraph(inst, m, rho.side, mask);
    for (std::size_t i = 0; i < r; ++i) {
        const auto& [x, y] = rho.pairs[i];
        const auto& [xn, yn] = rho.pairs[(i + 1) % r];
        bool matched = rho.side == Side::Students ? m[x] == y : m[y] == x;
        if (!matched) throw NotExposed("rotation pair is not in the assignment");
        if (d.x_out[x] != yn || d.y_out[yn] != xn)
            throw NotExposed("rotation is not a cycle of the rotation digraph");
    }
    return eliminate_unchecked(m, rho);
}

std::vector<Rotation> all_rotations(const Instance& inst, Side side, RotationCounters* counters) {
    PathEngineOptions opt;
    opt.side = side;
    opt.mode = PathEngineMode::Enumerate;
    auto res = run_path_engine(inst, opt);
    if (counters) {
        counters->edge_scans += res.edge_scans;
        counters->rescans += res.rescans;
        counters->proposals += res.gs.proposals;
    }
    return std::move(res.rotations);
}

std::vector<Rotation> all_rotations_naive(const Instance& inst, Side side) {
    Assignment m = side == Side::Students ? gs_student(inst) : gs_school(inst);
    std::vector<Rotation> out;
    for (;;) {
        auto rots = exposed_rotations(inst, m, side);
        if (rots.empty()) break;
        m = eliminate_unchecked(m, rots.front());
        out.push_back(rots.front());
    }
    return out;
}

Rotation sigma(const Rotation& rho) {
    if (rho.side != Side::Students) throw std::invalid_argument("sigma expects a student rotation");
    Rotation out{Side::Schools, {}};
    const std::size_t r = rho.pairs.size();
    for (std::size_t i = 0; i < r; ++i)
        out.pairs.emplace_back(rho.pairs[(i + 1) % r].second, rho.pairs[i].first);
    out.canonicalize();
    return out;
}

Rotation sigma_inverse(const Rotation& rho) {
    if (rho.side != Side::Schools)
        throw std::invalid_argument("sigma_inverse expects a school rotation");
    Rotation out{Side::Students, {}};
    const std::size_t r = rho.pairs.size();
    for (std::size_t i = 0; i < r; ++i)
        out.pairs.emplace_back(rho.pairs[i].second, rho.pairs[(i + r - 1) % r].first);
    out.canonicalize();
    return out;
}

std::string format_rotation(const Instance& inst, const Rotation& rho) {
    std::string s = side_name(rho.side);
    s += ':';
    for (const auto& [x, y] : rho.pairs) {
        const auto& xn = rho.side == Side::Students ? inst.student_name(x) : inst.school_name(x);
        const auto& yn = rho.side == Side::Students ? inst.school_name(y) : inst.student_name(y);
        s += " (" + xn + ' ' + yn + ')';
    }
    return s;
}

}  // namespace schoolchoice
