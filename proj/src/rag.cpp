#include "colorseg/rag.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace colorseg {

double merge_cost(const RegionStats& a, const RegionStats& b, int rank) {
    assert(a.n >= 1 && b.n >= 1);
    const double c = rank_ssd(merge_stats(a, b), rank) - rank_ssd(a, rank) - rank_ssd(b, rank);
    return c > 0.0 ? c : 0.0;
}

namespace {

bool sorted_contains(const std::vector<std::int32_t>& v, std::int32_t x) {
    return std::binary_search(v.begin(), v.end(), x);
}

void sorted_insert(std::vector<std::int32_t>& v, std::int32_t x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<std::int32_t>& v, std::int32_t x) {
    const auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

}  // namespace

bool Rag::adjacent(int a, int b) const {
    return sorted_contains(verts_[static_cast<std::size_t>(a)].nbrs, b);
}

std::vector<int> Rag::alive_ids() const {
    std::vector<int> ids;
    ids.reserve(static_cast<std::size_t>(alive_count_));
    for (int i = 0; i < vertex_capacity(); ++i) {
        if (verts_[static_cast<std::size_t>(i)].alive) ids.push_back(i);
    }
    return ids;
}

LabelMap Rag::extract_label_map() const {
    LabelMap out(init_labels_.width, init_labels_.height);
    for (std::size_t i = 0; i < init_labels_.size(); ++i) out[i] = dsu_.find(init_labels_[i]);
    return out;
}

int Rag::merge_with_cost(int a, int b, double cost, IsolationMarks* marks) {
    assert(a != b && alive(a) && alive(b) && adjacent(a, b));
    const int keep = std::min(a, b);
    const int dead = std::max(a, b);
    VertexRec& vk = verts_[static_cast<std::size_t>(keep)];
    VertexRec& vd = verts_[static_cast<std::size_t>(dead)];

    vk.stats = merge_stats(vk.stats, vd.stats);
    dsu_.unite(keep, dead);

    sorted_erase(vk.nbrs, dead);
    sorted_erase(vd.nbrs, keep);
    const bool track_locks = marks && !marks->locked.empty();
    for (const std::int32_t x : vd.nbrs) {
        auto& xn = verts_[static_cast<std::size_t>(x)].nbrs;
        sorted_erase(xn, dead);
        const bool had_keep_edge = sorted_contains(xn, keep);
        if (!had_keep_edge) {
            sorted_insert(xn, keep);
            sorted_insert(vk.nbrs, x);
        }
        if (track_locks) {
            // The union edge stays locked only if every constituent was.
            const bool lock_dx = marks->edge_locked(dead, x);
            const bool lock_kx = !had_keep_edge || marks->edge_locked(keep, x);
            marks->locked.erase(IsolationMarks::edge_key(dead, x));
            if (lock_dx && lock_kx) {
                marks->locked.insert(IsolationMarks::edge_key(keep, x));
            } else {
                marks->locked.erase(IsolationMarks::edge_key(keep, x));
            }
        }
    }
    if (track_locks) marks->locked.erase(IsolationMarks::edge_key(keep, dead));
    if (marks && !marks->isolated.empty()) {
        marks->isolated[static_cast<std::size_t>(keep)] =
            marks->isolated[static_cast<std::size_t>(keep)] || marks->isolated[static_cast<std::size_t>(dead)];
    }

    vd.nbrs.clear();
    vd.nbrs.shrink_to_fit();
    vd.stats = RegionStats{};
    vd.alive = false;
    ++vd.version;
    ++vk.version;
    --alive_count_;
    u_total_ += cost;
    return keep;
}

double Rag::merge_segments(int a, int b, int rank, IsolationMarks* marks) {
    const double cost = merge_cost(stats(a), stats(b), rank);
    merge_with_cost(a, b, cost, marks);
    return cost;
}

Rag build_rag(const LabelMap& labels, std::vector<RegionStats> stats) {
    if (labels.empty()) throw std::invalid_argument("build_rag: empty label image");
    const int k = static_cast<int>(stats.size());
    for (const std::int32_t l : labels.data) {
        if (l < 0 || l >= k) throw std::invalid_argument("build_rag: label outside [0, stats.size())");
    }

    Rag rag;
    rag.init_labels_ = labels;
    rag.n_pixels_ = static_cast<std::int64_t>(labels.size());
    rag.u_total_ = 0.0;
    rag.dsu_ = DisjointSet(k);
    rag.verts_.resize(stats.size());
    for (int i = 0; i < k; ++i) {
        rag.verts_[static_cast<std::size_t>(i)].stats = stats[static_cast<std::size_t>(i)];
        rag.verts_[static_cast<std::size_t>(i)].alive = true;
    }
    rag.alive_count_ = k;

    for (int y = 0; y < labels.height; ++y) {
        for (int x = 0; x < labels.width; ++x) {
            const std::int32_t l = labels.at(x, y);
            if (x + 1 < labels.width) {
                const std::int32_t r = labels.at(x + 1, y);
                if (r != l) {
                    rag.verts_[static_cast<std::size_t>(l)].nbrs.push_back(r);
                    rag.verts_[static_cast<std::size_t>(r)].nbrs.push_back(l);
                }
            }
            if (y + 1 < labels.height) {
                const std::int32_t d = labels.at(x, y + 1);
                if (d != l) {
                    rag.verts_[static_cast<std::size_t>(l)].nbrs.push_back(d);
                    rag.verts_[static_cast<std::size_t>(d)].nbrs.push_back(l);
                }
            }
        }
    }
    for (auto& v : rag.verts_) {
        std::sort(v.nbrs.begin(), v.nbrs.end());
        v.nbrs.erase(std::unique(v.nbrs.begin(), v.nbrs.end()), v.nbrs.end());
    }
    return rag;
}

double reinitialise_ssd(Rag& rag, int rank) {
    double u = 0.0;
    for (int id = 0; id < rag.vertex_capacity(); ++id) {
        if (rag.alive(id)) u += rank_ssd(rag.stats(id), rank);
    }
    rag.set_u_total(u);
    return u;
}

namespace {

struct HeapEntry {
    double cost;
    std::int32_t lo, hi;
    std::uint32_t vlo, vhi;
};

struct HeapGreater {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        return std::tie(a.cost, a.lo, a.hi, a.vlo, a.vhi) > std::tie(b.cost, b.lo, b.hi, b.vlo, b.vhi);
    }
};

bool edge_skipped(EdgeLockRule rule, const IsolationMarks* marks, int a, int b) {
    switch (rule) {
        case EdgeLockRule::none:
            return false;
        case EdgeLockRule::any_isolated:
            return marks && (marks->vertex_isolated(a) || marks->vertex_isolated(b));
        case EdgeLockRule::both_isolated:
            return marks && marks->vertex_isolated(a) && marks->vertex_isolated(b);
        case EdgeLockRule::locked_edges:
            return marks && marks->edge_locked(a, b);
    }
    return false;
}

}  // namespace

StageReport run_stage(Rag& rag, int rank, double sigma, EdgeLockRule rule, IsolationMarks* marks) {
    assert(rank >= 0 && rank <= 2 && sigma >= 0.0);
    // sqrt((U + c)/N) > sigma  <=>  U + c > sigma^2 N
    const double budget = sigma * sigma * static_cast<double>(rag.n_pixels());

    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapGreater> heap;
    for (int id = 0; id < rag.vertex_capacity(); ++id) {
        if (!rag.alive(id)) continue;
        for (const std::int32_t x : rag.neighbors(id)) {
            if (x <= id) continue;
            if (edge_skipped(rule, marks, id, x)) continue;
            heap.push({merge_cost(rag.stats(id), rag.stats(x), rank), id, x, rag.version(id),
                       rag.version(x)});
        }
    }

    StageReport report;
    while (!heap.empty()) {
        const HeapEntry e = heap.top();
        heap.pop();
        if (!rag.alive(e.lo) || !rag.alive(e.hi)) continue;
        if (rag.version(e.lo) != e.vlo || rag.version(e.hi) != e.vhi) continue;

        if (rag.u_total() + e.cost > budget) break;  // would cross the threshold

        const int keep = rag.merge_with_cost(e.lo, e.hi, e.cost, marks);
        ++report.merges;
        for (const std::int32_t x : rag.neighbors(keep)) {
            if (edge_skipped(rule, marks, keep, x)) continue;
            const int lo = std::min(keep, static_cast<int>(x));
            const int hi = std::max(keep, static_cast<int>(x));
            heap.push({merge_cost(rag.stats(lo), rag.stats(hi), rank), lo, hi, rag.version(lo),
                       rag.version(hi)});
        }
    }
    report.u_total = rag.u_total();
    return report;
}

}  // namespace colorseg
