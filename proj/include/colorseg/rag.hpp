#pragma once

#include <cstdint>
#include <unordered_set>
#include <vector>

#include "colorseg/image.hpp"
#include "colorseg/region_stats.hpp"

namespace colorseg {

/// Merge cost of Eq.-style edge weighting: the increase of the total SSD when
/// two segments are pooled under one rank-r model. Operates on statistics
/// only, never on pixels, so it is O(1) in segment size. Tiny negatives from
/// rounding are clamped to zero.
double merge_cost(const RegionStats& a, const RegionStats& b, int rank);

/// Isolation state produced by the gating heuristics: per-vertex flags plus a
/// set of locked edges. Both survive merges: a merged vertex inherits the OR
/// of its parents' flags, and a merged edge stays locked only when every
/// constituent edge was locked.
struct IsolationMarks {
    std::vector<char> isolated;
    std::unordered_set<std::uint64_t> locked;

    static std::uint64_t edge_key(int a, int b) {
        const std::uint64_t lo = static_cast<std::uint32_t>(a < b ? a : b);
        const std::uint64_t hi = static_cast<std::uint32_t>(a < b ? b : a);
        return (lo << 32) | hi;
    }
    bool edge_locked(int a, int b) const { return locked.count(edge_key(a, b)) != 0; }
    bool vertex_isolated(int v) const {
        return !isolated.empty() && isolated[static_cast<std::size_t>(v)] != 0;
    }
};

/// Which edges a merge stage must skip.
enum class EdgeLockRule {
    none,            ///< every edge mergeable
    any_isolated,    ///< skip edges touching an isolated vertex
    both_isolated,   ///< skip edges whose two endpoints are both isolated
    locked_edges,    ///< skip edges present in marks.locked
};

/// Union-find over segment ids where the surviving root is always the
/// smaller id, which keeps merged-vertex naming deterministic.
class DisjointSet {
public:
    DisjointSet() = default;
    explicit DisjointSet(int n) : parent_(n) {
        for (int i = 0; i < n; ++i) parent_[i] = i;
    }

    int find(int x) const {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];  // path halving
            x = parent_[x];
        }
        return x;
    }

    int unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return a;
        if (a > b) std::swap(a, b);
        parent_[b] = a;
        return a;
    }

private:
    mutable std::vector<std::int32_t> parent_;
};

/// Region adjacency graph over the current segmentation, carrying additive
/// statistics per vertex, sorted adjacency lists, the pixel-level union-find
/// and the running total SSD. Single writer; distinct instances are
/// independent.
class Rag {
public:
    std::int64_t n_pixels() const { return n_pixels_; }
    double u_total() const { return u_total_; }
    int vertex_capacity() const { return static_cast<int>(verts_.size()); }
    int alive_count() const { return alive_count_; }

    bool alive(int id) const { return verts_[static_cast<std::size_t>(id)].alive; }
    std::uint32_t version(int id) const { return verts_[static_cast<std::size_t>(id)].version; }
    const RegionStats& stats(int id) const { return verts_[static_cast<std::size_t>(id)].stats; }
    const std::vector<std::int32_t>& neighbors(int id) const {
        return verts_[static_cast<std::size_t>(id)].nbrs;
    }
    bool adjacent(int a, int b) const;
    std::vector<int> alive_ids() const;

    /// Current segment id owning an initial label.
    int find(int initial_label) const { return dsu_.find(initial_label); }

    /// Label image under the current union-find state (uncompacted ids).
    LabelMap extract_label_map() const;

    void set_u_total(double u) { u_total_ = u; }

    /// Commits the union of two adjacent alive segments; the smaller id
    /// survives. Adds `cost` to the running SSD, bumps versions and re-keys
    /// adjacency and marks. Returns the surviving id.
    int merge_with_cost(int a, int b, double cost, IsolationMarks* marks);

    /// merge_with_cost with the rank-r merge cost computed on the spot.
    double merge_segments(int a, int b, int rank, IsolationMarks* marks);

private:
    friend Rag build_rag(const LabelMap& labels, std::vector<RegionStats> stats);

    struct VertexRec {
        RegionStats stats;
        std::vector<std::int32_t> nbrs;  // sorted
        std::uint32_t version = 0;
        bool alive = false;
    };

    LabelMap init_labels_;
    std::vector<VertexRec> verts_;
    DisjointSet dsu_;
    double u_total_ = 0.0;
    std::int64_t n_pixels_ = 0;
    int alive_count_ = 0;
};

/// One vertex per label, one edge per 4-adjacent pair of distinct labels,
/// running SSD zero. Labels must lie in [0, stats.size()) and stats[l] must
/// describe label l's pixels.
Rag build_rag(const LabelMap& labels, std::vector<RegionStats> stats);

/// Recomputes the running SSD from scratch for a new rank; returns it.
double reinitialise_ssd(Rag& rag, int rank);

struct StageReport {
    int merges = 0;
    double u_total = 0.0;
};

/// Greedy merge loop: repeatedly commits the cheapest non-stale, non-locked
/// edge while sqrt((U + cost) / N) stays within sigma; the merge that would
/// cross the threshold is not committed. Stale heap entries are recognised by
/// endpoint version counters. Ties break on (cost, smaller id, larger id) so
/// runs are reproducible.
StageReport run_stage(Rag& rag, int rank, double sigma, EdgeLockRule rule = EdgeLockRule::none,
                      IsolationMarks* marks = nullptr);

}  // namespace colorseg
