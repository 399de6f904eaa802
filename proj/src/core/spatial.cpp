#include "spatial.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <map>

#include "csv.hpp"
#include "errors.hpp"

namespace scc {

void AdjacencyGraph::rebuild_neighbors() {
  const int nn = n();
  neighbors.assign(nn, {});
  for (int i = 0; i < nn; ++i)
    for (int j = 0; j < nn; ++j)
      if (a(i, j) != 0.0) neighbors[i].push_back(j);
}

AdjacencyGraph AdjacencyGraph::reordered(const std::vector<std::string>& ids) const {
  if (ids.size() != region_ids.size())
    fail(ErrorCode::Mismatch, "adjacency: region count differs from curve data (" +
                                  std::to_string(region_ids.size()) + " vs " +
                                  std::to_string(ids.size()) + ")");
  std::map<std::string, int> index;
  for (int i = 0; i < n(); ++i) index[region_ids[i]] = i;
  std::vector<int> perm;
  for (const auto& id : ids) {
    auto it = index.find(id);
    if (it == index.end()) fail(ErrorCode::Mismatch, "adjacency: unknown region '" + id + "'");
    perm.push_back(it->second);
  }
  AdjacencyGraph out;
  out.region_ids = ids;
  out.a.resize(n(), n());
  for (int i = 0; i < n(); ++i)
    for (int j = 0; j < n(); ++j) out.a(i, j) = a(perm[i], perm[j]);
  out.rebuild_neighbors();
  return out;
}

static void validate(AdjacencyGraph& g, const std::string& origin) {
  const int n = g.n();
  for (int i = 0; i < n; ++i) {
    if (g.a(i, i) != 0.0) fail(ErrorCode::Format, origin + ": nonzero diagonal at " + g.region_ids[i]);
    for (int j = 0; j < n; ++j) {
      const double v = g.a(i, j);
      if (v != 0.0 && v != 1.0) fail(ErrorCode::Format, origin + ": adjacency entries must be 0/1");
      if (v != g.a(j, i))
        fail(ErrorCode::Format, origin + ": asymmetric adjacency between " + g.region_ids[i] +
                                    " and " + g.region_ids[j]);
    }
  }
  g.rebuild_neighbors();
}

AdjacencyGraph adjacency_from_edges(const std::vector<std::pair<std::string, std::string>>& edges,
                                    const std::vector<std::string>& extra_regions) {
  std::map<std::string, int> index;
  std::vector<std::string> ids;
  auto intern = [&](const std::string& s) {
    auto [it, inserted] = index.try_emplace(s, static_cast<int>(ids.size()));
    if (inserted) ids.push_back(s);
    return it->second;
  };
  for (const auto& [a, b] : edges) {
    intern(a);
    intern(b);
  }
  for (const auto& r : extra_regions) intern(r);
  AdjacencyGraph g;
  g.region_ids = ids;
  g.a = Eigen::MatrixXd::Zero(static_cast<int>(ids.size()), static_cast<int>(ids.size()));
  for (const auto& [a, b] : edges) {
    if (a == b) fail(ErrorCode::Format, "adjacency edge list: self loop at " + a);
    g.a(index[a], index[b]) = 1.0;
    g.a(index[b], index[a]) = 1.0;
  }
  g.rebuild_neighbors();
  return g;
}

AdjacencyGraph adjacency_from_csv_text(const std::string& text, const std::string& origin) {
  auto table = csv::parse(text, origin);
  if (table.header.size() == 2 && table.header[0] == "region_a" && table.header[1] == "region_b") {
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& row : table.rows) edges.emplace_back(row[0], row[1]);
    auto g = adjacency_from_edges(edges);
    validate(g, origin);
    return g;
  }
  // matrix form: header region_id,<id1>,...,<idn>; one row per region
  if (table.header.empty() || table.header[0] != "region_id")
    fail(ErrorCode::Format,
         origin + ": adjacency CSV must be an edge list (region_a,region_b) or a matrix "
                  "with a region_id header row");
  const int n = static_cast<int>(table.header.size()) - 1;
  if (static_cast<int>(table.rows.size()) != n)
    fail(ErrorCode::Format, origin + ": adjacency matrix must be square");
  AdjacencyGraph g;
  g.region_ids.assign(table.header.begin() + 1, table.header.end());
  g.a.resize(n, n);
  for (int i = 0; i < n; ++i) {
    if (table.rows[i][0] != g.region_ids[i])
      fail(ErrorCode::Format, origin + ": adjacency row order must match the header");
    for (int j = 0; j < n; ++j) {
      try {
        g.a(i, j) = std::stod(table.rows[i][j + 1]);
      } catch (const std::exception&) {
        fail(ErrorCode::Format, origin + ": non-numeric adjacency entry");
      }
    }
  }
  validate(g, origin);
  return g;
}

AdjacencyGraph load_adjacency(const std::string& path) {
  return adjacency_from_csv_text(csv::read_text(path), path);
}

DistanceMatrix graph_distances(const AdjacencyGraph& g) {
  const int n = g.n();
  const double inf = std::numeric_limits<double>::infinity();
  DistanceMatrix dm;
  dm.d = Eigen::MatrixXd::Constant(n, n, inf);
  // unit edge weights: BFS from each source
  for (int s = 0; s < n; ++s) {
    dm.d(s, s) = 0.0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (int v : g.neighbors[u]) {
        if (std::isinf(dm.d(s, v))) {
          dm.d(s, v) = dm.d(s, u) + 1.0;
          queue.push_back(v);
        }
      }
    }
  }
  return dm;
}

WeightMatrix weight_matrix(const DistanceMatrix& dm, double h, DisconnectedPolicy policy) {
  if (h < 0.0) fail(ErrorCode::Domain, "weight_matrix: h must be >= 0");
  const int n = static_cast<int>(dm.d.rows());
  WeightMatrix wm;
  wm.h = h;
  wm.w.resize(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double d = dm.d(i, j);
      double w;
      if (std::isinf(d)) {
        if (policy == DisconnectedPolicy::kZeroWeight)
          w = (h == 0.0) ? 1.0 : 0.0;
        else
          w = std::exp(-static_cast<double>(n) * h);
      } else if (d <= 1.0) {
        w = 1.0;
      } else {
        w = std::exp(-d * h);
      }
      wm.w(i, j) = w;
    }
  }
  return wm;
}

CarBounds car_bounds(const AdjacencyGraph& g) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) fail(ErrorCode::Numeric, "car_bounds: eigendecomposition failed");
  CarBounds b;
  b.eigenvalues = es.eigenvalues();
  const double lmin = b.eigenvalues.minCoeff();
  const double lmax = b.eigenvalues.maxCoeff();
  const double tol = 1e-10 * std::max(1.0, std::abs(lmax));
  if (lmax <= tol || lmin >= -tol)
    fail(ErrorCode::Degenerate, "car_bounds: adjacency spectrum is degenerate (edgeless graph?)");
  b.ell = 1.0 / lmin;
  b.u = 1.0 / lmax;
  return b;
}

double car_log_det(const CarBounds& b, double phi) {
  if (!b.contains(phi)) fail(ErrorCode::Domain, "car_log_det: phi outside the CAR support");
  double s = 0.0;
  for (int i = 0; i < b.eigenvalues.size(); ++i) s += std::log1p(-phi * b.eigenvalues(i));
  return s;
}

}  // namespace scc
