#include "path_engine.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "schoolchoice/random.hpp"

namespace schoolchoice {

namespace {

constexpr int kEmptyNode = -2;

// X = schools, Y = students.
class SchoolSide {
public:
    SchoolSide(const Instance& inst, const Assignment& m)
        : inst_(inst), match_(m.raw()), pos_(inst.num_students(), std::numeric_limits<int>::max()) {
        // Walking the list costs no more than the proposals that led here.
        for (int a = 0; a < inst.num_students(); ++a) {
            if (match_[a] == kNone) continue;
            auto list = inst.student_list(a);
            int r = 0;
            while (list[r] != match_[a]) ++r;
            pos_[a] = r;
        }
    }

    int num_x() const { return inst_.num_schools(); }
    int degree(int x) const { return inst_.school_degree(x); }
    int y_at(int x, int p) const { return inst_.school_list(x)[p]; }

    void initial_cursors(std::vector<int>& cur) const {
        for (int a = 0; a < inst_.num_students(); ++a)
            if (match_[a] != kNone) {
                int r = inst_.student_cross(a)[pos_[a]];
                cur[match_[a]] = std::max(cur[match_[a]], r + 1);
            }
    }

    // A student held by b sees b at exactly its own rank, so one comparison
    // covers both the held and the unmatched case.
    bool accepts(int b, int p) const { return inst_.school_cross(b)[p] < pos_[inst_.school_list(b)[p]]; }
    // First accepting position in [p, deg), or deg.
    int scan(int b, int p, int deg) const {
        const StudentId* list = inst_.school_list(b).data();
        const std::int32_t* cross = inst_.school_cross(b).data();
        const int* pos = pos_.data();
        while (p < deg && cross[p] >= pos[list[p]]) ++p;
        return p;
    }
    int next(int b, int p) const { return match_[inst_.school_list(b)[p]]; }

    // x gains the agent at position p of its list.
    void gain(int b, int p) {
        StudentId a = inst_.school_list(b)[p];
        match_[a] = b;
        pos_[a] = inst_.school_cross(b)[p];
    }
    void finish_elimination() {}

    StudentId student_of(int x, int p) const { return y_at(x, p); }
    SchoolId school_of(int x, int) const { return x; }
    std::int64_t cell(int b, int p) const {
        return inst_.student_cell(inst_.school_list(b)[p], inst_.school_cross(b)[p]);
    }
    Assignment assignment() const { return Assignment(match_); }

private:
    const Instance& inst_;
    std::vector<SchoolId> match_;
    std::vector<int> pos_;  // rank of the match in the student's list; max when unmatched
};

// X = students, Y = schools.
class StudentSide {
public:
    StudentSide(const Instance& inst, const Assignment& m, std::int64_t* scans)
        : inst_(inst),
          match_(m.raw()),
          match_pos_(inst.num_students(), -1),
          count_(inst.num_schools(), 0),
          worst_(inst.num_schools(), -1),
          held_(inst.num_schools()),
          scans_(scans) {
        for (int b = 0; b < inst.num_schools(); ++b) held_[b].assign(inst.school_degree(b), 0);
        for (int a = 0; a < inst.num_students(); ++a) {
            if (match_[a] == kNone) continue;
            auto list = inst.student_list(a);
            int r = 0;
            while (list[r] != match_[a]) ++r;
            match_pos_[a] = r;
            held_[match_[a]][inst.student_cross(a)[r]] = 1;
            ++count_[match_[a]];
        }
        for (int b = 0; b < inst.num_schools(); ++b) {
            if (count_[b] < inst.quota(b)) continue;
            worst_[b] = inst.school_degree(b);
            retreat(b);
        }
    }

    int num_x() const { return inst_.num_students(); }
    int degree(int x) const { return inst_.student_degree(x); }
    int y_at(int x, int p) const { return inst_.student_list(x)[p]; }

    void initial_cursors(std::vector<int>& cur) const {
        for (int a = 0; a < inst_.num_students(); ++a) cur[a] = match_pos_[a] + 1;
    }

    bool accepts(int a, int p) const {
        SchoolId b = inst_.student_list(a)[p];
        if (b == match_[a]) return false;
        return count_[b] < inst_.quota(b) || inst_.student_cross(a)[p] < worst_[b];
    }
    int scan(int a, int p, int deg) const {
        while (p < deg && !accepts(a, p)) ++p;
        return p;
    }
    int next(int a, int p) const {
        SchoolId b = inst_.student_list(a)[p];
        if (count_[b] < inst_.quota(b)) return kNone;
        return inst_.school_list(b)[worst_[b]];
    }

    void gain(int a, int p) {
        SchoolId old = match_[a];
        held_[old][inst_.student_cross(a)[match_pos_[a]]] = 0;
        SchoolId b = inst_.student_list(a)[p];
        held_[b][inst_.student_cross(a)[p]] = 1;
        match_[a] = b;
        match_pos_[a] = p;
        touched_.push_back(b);
    }
    // Every school on the cycle swapped its worst member for a better one.
    void finish_elimination() {
        for (SchoolId b : touched_) retreat(b);
        touched_.clear();
    }

    StudentId student_of(int x, int) const { return x; }
    SchoolId school_of(int x, int p) const { return y_at(x, p); }
    std::int64_t cell(int a, int p) const { return inst_.student_cell(a, p); }
    Assignment assignment() const { return Assignment(match_); }

private:
    void retreat(SchoolId b) {
        int w = worst_[b];
        if (w < static_cast<int>(held_[b].size()) && w >= 0 && held_[b][w]) return;
        --w;
        while (!held_[b][w]) {
            --w;
            ++*scans_;
        }
        worst_[b] = w;
    }

    const Instance& inst_;
    std::vector<SchoolId> match_;
    std::vector<int> match_pos_;
    std::vector<int> count_;
    std::vector<int> worst_;
    std::vector<std::vector<std::uint8_t>> held_;
    std::vector<SchoolId> touched_;
    std::int64_t* scans_;
};

template <class Policy>
class Engine {
public:
    Engine(const Instance& inst, const PathEngineOptions& opt, Policy& pol, PathEngineResult& res)
        : inst_(inst), opt_(opt), pol_(pol), res_(res) {
        const int nx = pol_.num_x();
        cursor_.assign(nx, 0);
        pol_.initial_cursors(cursor_);
        sink_.assign(nx, 0);
        index_.assign(nx, -1);
        order_.resize(nx);
        std::iota(order_.begin(), order_.end(), 0);
        if (opt_.shuffle_seed) SplitMix64(*opt_.shuffle_seed).shuffle(order_);
        if (opt_.check_invariants) removed_cell_.assign(inst.num_edges(), 0);
    }

    void run() {
        const int nx = pol_.num_x();
        std::size_t f = 0;
        for (;;) {
            if (px_.empty()) {
                while (f < order_.size() && sink_[order_[f]]) ++f;
                if (f == static_cast<std::size_t>(nx)) break;
                push(order_[f], -1, -1);
                check();
            }
            int x = px_.back();
            if (x == kEmptyNode) {
                at_sink();
                check();
                continue;
            }
            const int deg = pol_.degree(x);
            const int found = pol_.scan(x, cursor_[x], deg);
            const int stop = found < deg ? found + 1 : deg;
            res_.edge_scans += stop - cursor_[x];
            cursor_[x] = stop;
            if (found == deg) {
                sink_[x] = 1;
                at_sink();
                check();
                continue;
            }
            int y = pol_.y_at(x, found);
            int nxt = pol_.next(x, found);
            if (nxt == kNone) {
                push(kEmptyNode, y, found);
            } else if (index_[nxt] >= 0) {
                eliminate_cycle(index_[nxt], y, found);
            } else {
                push(nxt, y, found);
            }
            check();
        }
    }

private:
    void push(int x, int y, int pos) {
        if (x != kEmptyNode) index_[x] = static_cast<int>(px_.size());
        px_.push_back(x);
        py_.push_back(y);
        ppos_.push_back(pos);
        ++res_.path_extensions;
    }

    void pop() {
        if (px_.back() != kEmptyNode) index_[px_.back()] = -1;
        px_.pop_back();
        py_.pop_back();
        ppos_.pop_back();
    }

    // Tail of the path is a sink or the empty node.
    void at_sink() {
        if (opt_.mode == PathEngineMode::Enumerate) {
            // Every agent on the path is stuck behind the sink for good.
            while (!px_.empty()) {
                int x = px_.back();
                if (x != kEmptyNode) {
                    sink_[x] = 1;
                    cursor_[x] = pol_.degree(x);
                }
                pop();
            }
            return;
        }
        const int pos = ppos_.back();
        pop();
        if (px_.empty()) return;
        const int prev = px_.back();
        res_.removed.emplace_back(pol_.student_of(prev, pos), pol_.school_of(prev, pos));
        if (opt_.check_invariants) removed_cell_[pol_.cell(prev, pos)] = 1;
        if (opt_.consenting && !(*opt_.consenting)[pol_.student_of(prev, pos)]) {
            // Nonconsenting student: the school keeps nobody below him.
            const int deg = pol_.degree(prev);
            res_.cascade_removed += deg - cursor_[prev];
            if (opt_.check_invariants)
                for (int p = cursor_[prev]; p < deg; ++p) removed_cell_[pol_.cell(prev, p)] = 1;
            cursor_[prev] = deg;
            sink_[prev] = 1;
        }
    }

    void eliminate_cycle(int l, int y_close, int pos_close) {
        const int j = static_cast<int>(px_.size()) - 1;
        Rotation rho{opt_.side, {}};
        for (int k = l; k <= j; ++k)
            rho.pairs.emplace_back(px_[k], k == l ? y_close : py_[k]);
        for (int k = l; k < j; ++k) pol_.gain(px_[k], ppos_[k + 1]);
        pol_.gain(px_[j], pos_close);
        pol_.finish_elimination();
        rho.canonicalize();
        res_.rotations.push_back(std::move(rho));
        while (static_cast<int>(px_.size()) > l) pop();
        if (l > 0) {
            --cursor_[px_.back()];
            ++res_.rescans;
        }
    }

    void check() {
        if (opt_.check_invariants) check_all();
    }

    void check_all() {
        const int nx = pol_.num_x();
        // Path membership.
        for (int x = 0; x < nx; ++x) {
            int i = index_[x];
            if (i >= 0 && (i >= static_cast<int>(px_.size()) || px_[i] != x))
                throw std::logic_error("path index out of sync");
        }
        for (std::size_t i = 0; i < px_.size(); ++i)
            if (px_[i] != kEmptyNode && index_[px_[i]] != static_cast<int>(i))
                throw std::logic_error("path member missing from index");
        for (int x = 0; x < nx; ++x) {
            // Position whose acceptance is still pending along the path.
            int pending = -1;
            if (index_[x] >= 0 && index_[x] + 1 < static_cast<int>(px_.size()))
                pending = ppos_[index_[x] + 1];
            const int lim = sink_[x] ? pol_.degree(x) : cursor_[x];
            if (sink_[x] && cursor_[x] != pol_.degree(x))
                throw std::logic_error("sink with unscanned list");
            for (int p = 0; p < lim; ++p) {
                if (p == pending || removed_cell_[pol_.cell(x, p)]) continue;
                if (pol_.accepts(x, p))
                    throw std::logic_error("scan invariant violated at agent " + std::to_string(x) +
                                           " position " + std::to_string(p));
            }
        }
        Assignment m = pol_.assignment();
        for (auto [a, b] : blocking_pairs(inst_, m))
            if (!removed_cell_[inst_.student_cell(a, *inst_.student_rank(a, b))])
                throw std::logic_error("intermediate assignment unstable in the current subgraph");
    }

    const Instance& inst_;
    const PathEngineOptions& opt_;
    Policy& pol_;
    PathEngineResult& res_;
    std::vector<int> cursor_;
    std::vector<std::uint8_t> sink_;
    std::vector<int> index_;  // position on the path, -1 if absent
    std::vector<int> order_;
    std::vector<int> px_, py_, ppos_;
    std::vector<std::uint8_t> removed_cell_;
};

}  // namespace

PathEngineResult run_path_engine(const Instance& inst, const PathEngineOptions& opt) {
    PathEngineResult res;
    if (opt.consenting && opt.side != Side::Schools)
        throw std::invalid_argument("consent applies to school-side rotate-remove only");
    // Rotate-remove starts where no X-rotation is exposed; enumeration
    // starts at the opposite end of the lattice.
    bool students_propose = (opt.side == Side::Schools) == (opt.mode == PathEngineMode::RotateRemove);
    Assignment start = students_propose ? gs_student(inst, &res.gs) : gs_school(inst, &res.gs);
    if (opt.side == Side::Schools) {
        SchoolSide pol(inst, start);
        Engine<SchoolSide> e(inst, opt, pol, res);
        e.run();
        res.assignment = pol.assignment();
    } else {
        StudentSide pol(inst, start, &res.edge_scans);
        Engine<StudentSide> e(inst, opt, pol, res);
        e.run();
        res.assignment = pol.assignment();
    }
    return res;
}

}  // namespace schoolchoice
