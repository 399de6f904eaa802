#ifndef SCC_SPATIAL_HPP
#define SCC_SPATIAL_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace scc {

struct AdjacencyGraph {
  Eigen::MatrixXd a;                          // n x n symmetric 0/1, zero diagonal
  std::vector<std::string> region_ids;        // length n
  std::vector<std::vector<int>> neighbors;    // adjacency lists, derived from a

  int n() const { return static_cast<int>(a.rows()); }
  void rebuild_neighbors();
  // Reorder the vertex set to match `ids` exactly (error on mismatch).
  AdjacencyGraph reordered(const std::vector<std::string>& ids) const;
};

// Shortest-path hop counts; +inf for disconnected pairs.
struct DistanceMatrix {
  Eigen::MatrixXd d;
};

enum class DisconnectedPolicy {
  // Disconnected pairs behave as if at hop distance n; weights stay positive
  // and degenerate to 1 at h=0 with no special case.
  kSentinelHops,
  // w=0 for h>0 and w=1 at h=0.
  kZeroWeight,
};

struct WeightMatrix {
  Eigen::MatrixXd w;
  double h = 0.0;
};

struct CarBounds {
  double ell = 0.0;  // 1/lambda_min, negative
  double u = 0.0;    // 1/lambda_max, positive
  Eigen::VectorXd eigenvalues;
  bool contains(double phi) const { return phi > ell && phi < u; }
};

// Edge-list CSV (region_a,region_b) or full 0/1 matrix CSV with a region
// header row; both validated for symmetry.
AdjacencyGraph load_adjacency(const std::string& path);
AdjacencyGraph adjacency_from_csv_text(const std::string& text, const std::string& origin);
AdjacencyGraph adjacency_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                                    const std::vector<std::string>& extra_regions = {});

DistanceMatrix graph_distances(const AdjacencyGraph& g);

WeightMatrix weight_matrix(const DistanceMatrix& d, double h,
                           DisconnectedPolicy policy = DisconnectedPolicy::kSentinelHops);

CarBounds car_bounds(const AdjacencyGraph& g);

// log det(I - phi*A) via the cached spectrum.
double car_log_det(const CarBounds& b, double phi);

}  // namespace scc

#endif
