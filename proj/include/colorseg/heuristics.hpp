#pragma once

#include "colorseg/rag.hpp"
#include "colorseg/region_stats.hpp"

namespace colorseg {

/// Ridge added to segment covariances before inversion: one 8-bit
/// quantisation step in normalised colour units, the noise floor below which
/// a segment's spread carries no information.
inline constexpr double kCovarianceRidge = (1.0 / 255.0) * (1.0 / 255.0);

/// Symmetrised (Jeffreys) Kullback-Leibler divergence between Gaussians
/// fitted to the two segments: mean = centroid, covariance = scatter/n plus
/// the ridge. Non-negative, symmetric, zero for identical segments.
double gaussian_kl(const RegionStats& a, const RegionStats& b);

/// Line-segment cluster model: the major axis of the dispersion ellipsoid,
/// centred on the segment mean, spanning one ellipsoid semi-axis each way
/// (half_length = sqrt of the largest covariance eigenvalue).
struct SegmentLineModel {
    Vec3 center{};
    Vec3 direction{1.0, 0.0, 0.0};  // unit
    double half_length = 0.0;
};

SegmentLineModel line_model(const RegionStats& st);

/// Euclidean distance from a point to the closed segment.
double point_segment_distance(const Vec3& p, const SegmentLineModel& seg);

/// True when the two model segments form an L- or T-shaped pair: some
/// endpoint of one lies within delta_l of the other segment. Symmetric.
bool lt_shape_test(const SegmentLineModel& a, const SegmentLineModel& b, double delta_l);

/// Flags every segment whose minimal Gaussian divergence to a neighbour
/// exceeds sigma_g; segments with no neighbours count as isolated.
IsolationMarks mark_isolated_rank0(const Rag& rag, double sigma_g);

/// Locks every edge whose endpoint line models fail the L/T-shape check.
/// Vertex flags are left clear: this gate is pairwise.
IsolationMarks lock_non_lt_edges(const Rag& rag, double delta_l);

/// Absorbs off-scale (overexposed) regions: a region whose mean brightness in
/// the original colour space exceeds mu_b is merged into its sole neighbour,
/// or together with any two mutually non-adjacent neighbours that pass the
/// L/T check. Runs to a fixpoint; merges bypass the stage thresholds but are
/// still accounted into the running SSD at rank 2. Returns the number of
/// pairwise unions performed.
int off_scale_merge(Rag& rag, double mu_b, double delta_l, IsolationMarks* marks = nullptr);

}  // namespace colorseg
