#include "pipeline.hpp"

#include <filesystem>
#include <json.hpp>
#include <map>
#include <sstream>

#include "errors.hpp"
#include "log.hpp"
#include "us_data.hpp"

namespace scc {

using nlohmann::json;

namespace {

constexpr uint64_t kFitStream = 0x666974ULL;  // chain seed stream tag

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  csv::write_file(tmp, content);
  std::filesystem::rename(tmp, path);
}

json labels_json(const std::vector<int>& labels) {
  json arr = json::array();
  for (int l : labels) arr.push_back(l + 1);  // 1-based in outputs
  return arr;
}

}  // namespace

PreprocessResult preprocess_file(const std::string& input_csv, const std::string& date_start,
                                 const std::string& date_end, const std::string& out_curves,
                                 const std::string& out_report) {
  std::optional<Date> start, end;
  if (!date_start.empty()) start = Date::parse(date_start);
  if (!date_end.empty()) end = Date::parse(date_end);
  auto series = load_cumulative_cases(input_csv, start, end);

  json corrections = json::array();
  PreprocessResult result;
  std::vector<CumulativeSeries> corrected;
  for (const auto& s : series) {
    auto fixed = correct_negatives(s);
    const long long removed = miscount_removed(s, fixed);
    if (removed > 0)
      corrections.push_back({{"region_id", s.region_id}, {"cases_removed", removed}});
    result.total_corrections += removed;
    corrected.push_back(std::move(fixed));
  }
  auto curves = to_growth_curves(corrected);
  result.n_regions = curves.n();
  result.t_grid = curves.t();

  json echo = {{"command", "preprocess"},
               {"input", input_csv},
               {"date_start", date_start},
               {"date_end", date_end}};
  write_atomic(out_curves, curve_csv_text(curves, echo.dump()));

  json report = {{"config", echo},
                 {"n_regions", result.n_regions},
                 {"t_grid", result.t_grid},
                 {"total_cases_removed", result.total_corrections},
                 {"corrections", corrections}};
  write_atomic(out_report, report.dump(2) + "\n");
  return result;
}

void simulate_file(int design, uint64_t seed, const std::string& out_curves,
                   const std::string& out_truth) {
  auto data = gen_design(design, seed);
  json echo = {{"command", "simulate"}, {"design", design}, {"seed", seed}};
  write_atomic(out_curves, curve_csv_text(data.curves, echo.dump()));

  std::ostringstream truth;
  truth << "# config " << echo.dump() << "\n";
  truth << "region_id,true_cluster\n";
  for (int i = 0; i < data.curves.n(); ++i)
    truth << data.curves.region_ids[i] << ',' << data.truth.labels[i] + 1 << "\n";
  write_atomic(out_truth, truth.str());
}

FitArtifacts fit_data(const CurveMatrix& curves, const AdjacencyGraph& graph_in,
                      const RunConfig& cfg, int h_index) {
  const AdjacencyGraph graph = graph_in.reordered(curves.region_ids);
  const int p = cfg.resolve_p(curves);
  const BasisSet basis = build_basis(p, curves.t(), cfg.spline_order);
  const CarBounds bounds = car_bounds(graph);
  const DistanceMatrix dist = graph_distances(graph);
  const WeightMatrix weights = weight_matrix(dist, cfg.h, cfg.disconnected_policy());
  const Hyperparams hyper = [&] {
    Hyperparams hp = cfg.hyperparams(p);
    hp.h = cfg.h;
    return hp;
  }();
  GwdpModel model(curves, basis, graph, bounds, hyper, cfg.form());

  McmcConfig mcfg = cfg.mcmc();
  mcfg.seed = derive_seed(cfg.seed, kFitStream, static_cast<uint64_t>(h_index));
  log::info("fit: n=%d T=%d p=%d h=%g iterations=%d", curves.n(), curves.t(), p, cfg.h,
            mcfg.iterations);

  FitArtifacts fit;
  fit.trace = run_mcmc(model, weights, mcfg);
  fit.lpml = cpo_lpml(fit.trace, model);
  fit.lpml.h = cfg.h;
  fit.summary = summarize(fit.trace, model);
  fit.p = p;
  fit.h = cfg.h;
  fit.region_ids = curves.region_ids;
  return fit;
}

void write_trace(const std::string& path, const McmcTrace& trace, const RunConfig& cfg,
                 double h, int p) {
  std::ostringstream out;
  json meta = {{"meta",
                {{"config", json::parse(cfg.to_json())},
                 {"h", h},
                 {"p", p},
                 {"seed", trace.seed},
                 {"acceptance_rate", trace.acceptance_rate},
                 {"proposal_sd_final", trace.final_proposal_sd},
                 {"draws", trace.draws.size()}}}};
  out << meta.dump() << "\n";
  for (const Draw& d : trace.draws) {
    json clusters = json::array();
    for (const ClusterParams& cp : d.clusters) {
      json beta = json::array();
      for (int k = 0; k < cp.beta.size(); ++k) beta.push_back(cp.beta(k));
      clusters.push_back({{"beta", beta}, {"sigma2", cp.sigma2}});
    }
    json rec = {{"iter", d.iter},
                {"phi", d.phi},
                {"labels", labels_json(d.partition.labels)},
                {"clusters", clusters}};
    out << rec.dump() << "\n";
  }
  write_atomic(path, out.str());
}

McmcTrace read_trace(const std::string& path) {
  std::istringstream in(csv::read_text(path));
  std::string line;
  McmcTrace trace;
  bool saw_meta = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      fail(ErrorCode::Format, path + ": invalid trace line: " + e.what());
    }
    if (j.contains("meta")) {
      trace.seed = j["meta"].value("seed", uint64_t{0});
      trace.acceptance_rate = j["meta"].value("acceptance_rate", 0.0);
      saw_meta = true;
      continue;
    }
    Draw d;
    d.iter = j.at("iter").get<int>();
    d.phi = j.at("phi").get<double>();
    std::vector<int> labels;
    for (const auto& l : j.at("labels")) labels.push_back(l.get<int>() - 1);
    d.partition = Partition::canonical(labels);
    for (const auto& c : j.at("clusters")) {
      ClusterParams cp;
      const auto& beta = c.at("beta");
      cp.beta.resize(static_cast<int>(beta.size()));
      for (int k = 0; k < cp.beta.size(); ++k) cp.beta(k) = beta[k].get<double>();
      cp.sigma2 = c.at("sigma2").get<double>();
      d.clusters.push_back(std::move(cp));
    }
    trace.draws.push_back(std::move(d));
  }
  if (!saw_meta && trace.draws.empty()) fail(ErrorCode::Format, path + ": empty trace file");
  return trace;
}

std::string summary_json(const FitArtifacts& fit, const RunConfig& cfg) {
  json mean_curves = json::array();
  for (const auto& curve : fit.summary.mean_curves) {
    json arr = json::array();
    for (int t = 0; t < curve.size(); ++t) arr.push_back(curve(t));
    mean_curves.push_back(arr);
  }
  json khist = json::object();
  for (const auto& [k, count] : fit.summary.k_histogram) khist[std::to_string(k)] = count;
  json log_cpo = json::array();
  for (double v : fit.lpml.per_region_log_cpo) log_cpo.push_back(v);

  json j = {{"config", json::parse(cfg.to_json())},
            {"h", fit.h},
            {"p", fit.p},
            {"seed", fit.trace.seed},
            {"region_ids", fit.region_ids},
            {"dahl_labels", labels_json(fit.summary.partition.labels)},
            {"num_clusters", fit.summary.partition.num_clusters()},
            {"mean_curves", mean_curves},
            {"phi_ci", {fit.summary.phi_lo, fit.summary.phi_hi}},
            {"k_histogram", khist},
            {"lpml_by_h", {{csv::format_double(fit.h), fit.lpml.lpml}}},
            {"lpml", fit.lpml.lpml},
            {"log_cpo", log_cpo},
            {"acceptance_rate", fit.trace.acceptance_rate},
            {"mean_curve_fallback", fit.summary.used_fallback},
            {"flagged_regions", fit.lpml.flagged_regions}};
  return j.dump(2) + "\n";
}

void write_labels_csv(const std::string& path, const std::vector<std::string>& region_ids,
                      const std::vector<int>& labels, const std::string& config_echo) {
  std::ostringstream out;
  if (!config_echo.empty()) out << "# config " << config_echo << "\n";
  out << "region_id,cluster\n";
  for (size_t i = 0; i < region_ids.size(); ++i) out << region_ids[i] << ',' << labels[i] + 1 << "\n";
  write_atomic(path, out.str());
}

std::vector<std::pair<std::string, int>> read_labels_csv(const std::string& path) {
  auto table = csv::read_file(path);
  if (table.header.size() < 2 || table.header[0] != "region_id")
    fail(ErrorCode::Format, path + ": label CSV needs region_id,<cluster> columns");
  std::vector<std::pair<std::string, int>> out;
  for (const auto& row : table.rows) {
    try {
      out.emplace_back(row[0], std::stoi(row[1]));
    } catch (const std::exception&) {
      fail(ErrorCode::Format, path + ": non-integer cluster label for " + row[0]);
    }
  }
  return out;
}

void fit_file(const std::string& curves_csv, const std::string& adjacency_csv,
              const RunConfig& cfg, const std::string& out_trace, const std::string& out_summary,
              const std::string& out_labels) {
  const CurveMatrix curves = read_curve_csv(curves_csv);
  const AdjacencyGraph graph = load_adjacency(adjacency_csv);
  FitArtifacts fit = fit_data(curves, graph, cfg, 0);
  if (!out_trace.empty()) write_trace(out_trace, fit.trace, cfg, fit.h, fit.p);
  if (!out_summary.empty()) write_atomic(out_summary, summary_json(fit, cfg));
  if (!out_labels.empty())
    write_labels_csv(out_labels, fit.region_ids, fit.summary.partition.labels, cfg.to_json());
}

SelectHResult select_h_file(const std::string& curves_csv, const std::string& adjacency_csv,
                            const RunConfig& cfg, const std::string& out_lpml_csv,
                            const std::string& out_summary, const std::string& out_trace,
                            const std::string& out_labels) {
  const CurveMatrix curves = read_curve_csv(curves_csv);
  const AdjacencyGraph graph = load_adjacency(adjacency_csv);

  std::vector<FitArtifacts> fits(cfg.h_grid.size());
  auto fit_one = [&](int idx) {
    RunConfig local = cfg;
    local.h = cfg.h_grid[idx];
    fits[idx] = fit_data(curves, graph, local, idx);
    return fits[idx].lpml;
  };
  HSelection sel = select_h(cfg.h_grid, fit_one, cfg.jobs);

  std::ostringstream lpml_csv;
  lpml_csv << "# config " << cfg.to_json() << "\n";
  lpml_csv << "h,lpml,status\n";
  SelectHResult result;
  for (size_t i = 0; i < cfg.h_grid.size(); ++i) {
    lpml_csv << csv::format_double(cfg.h_grid[i]) << ',';
    if (sel.errors[i].empty()) {
      lpml_csv << csv::format_double(sel.reports[i].lpml) << ",ok\n";
    } else {
      lpml_csv << ",error\n";
      result.failures++;
    }
  }
  if (!out_lpml_csv.empty()) write_atomic(out_lpml_csv, lpml_csv.str());

  const FitArtifacts& best = fits[sel.best_index];
  RunConfig best_cfg = cfg;
  best_cfg.h = sel.best_h;
  if (!out_summary.empty()) {
    json j = json::parse(summary_json(best, best_cfg));
    json by_h = json::object();
    for (size_t i = 0; i < cfg.h_grid.size(); ++i)
      if (sel.errors[i].empty()) by_h[csv::format_double(cfg.h_grid[i])] = sel.reports[i].lpml;
    j["lpml_by_h"] = by_h;
    write_atomic(out_summary, j.dump(2) + "\n");
  }
  if (!out_trace.empty()) write_trace(out_trace, best.trace, best_cfg, best.h, best.p);
  if (!out_labels.empty())
    write_labels_csv(out_labels, best.region_ids, best.summary.partition.labels,
                     best_cfg.to_json());
  result.best_h = sel.best_h;
  return result;
}

void evaluate_file(const std::string& estimated_labels, const std::string& truth_labels,
                   const std::string& curves_csv_for_baseline, uint64_t baseline_seed,
                   const std::string& out_json) {
  auto est = read_labels_csv(estimated_labels);
  auto truth = read_labels_csv(truth_labels);
  if (est.size() != truth.size())
    fail(ErrorCode::Mismatch, "evaluate: label files have different region counts");
  std::map<std::string, int> truth_by_region(truth.begin(), truth.end());
  std::vector<int> a, b;
  for (const auto& [region, label] : est) {
    auto it = truth_by_region.find(region);
    if (it == truth_by_region.end())
      fail(ErrorCode::Mismatch, "evaluate: region '" + region + "' missing from truth labels");
    a.push_back(label);
    b.push_back(it->second);
  }
  json j = {{"config",
             {{"command", "evaluate"}, {"estimated", estimated_labels}, {"truth", truth_labels}}},
            {"rand_index", rand_index(a, b)},
            {"n_regions", a.size()}};

  if (!curves_csv_for_baseline.empty()) {
    const CurveMatrix curves = read_curve_csv(curves_csv_for_baseline);
    if (curves.region_ids.size() != est.size())
      fail(ErrorCode::Mismatch, "evaluate: baseline curves do not match label files");
    auto km = kmeans_baseline(curves, 2, std::min(5, curves.n() - 1), baseline_seed);
    std::map<std::string, int> km_by_region;
    for (int i = 0; i < curves.n(); ++i) km_by_region[curves.region_ids[i]] = km.labels[i];
    std::vector<int> c;
    for (const auto& [region, label] : est) {
      (void)label;
      auto it = km_by_region.find(region);
      if (it == km_by_region.end())
        fail(ErrorCode::Mismatch, "evaluate: region '" + region + "' missing from curves");
      c.push_back(it->second);
    }
    j["kmeans"] = {{"k", km.k},
                   {"rand_index_vs_truth", rand_index(c, b)},
                   {"ch_index", km.ch_index},
                   {"seed", baseline_seed}};
  }
  write_atomic(out_json, j.dump(2) + "\n");
}

void summarize_file(const std::string& trace_path, const std::string& curves_csv,
                    const std::string& adjacency_csv, const RunConfig& cfg,
                    const std::string& out_summary, const std::string& out_mean_curves_csv) {
  const CurveMatrix curves = read_curve_csv(curves_csv);
  const AdjacencyGraph graph = load_adjacency(adjacency_csv).reordered(curves.region_ids);
  McmcTrace trace = read_trace(trace_path);
  if (trace.draws.empty()) fail(ErrorCode::InvalidArgument, "summarize: trace has no draws");

  const int p = static_cast<int>(trace.draws.front().clusters.front().beta.size());
  const BasisSet basis = build_basis(p, curves.t(), cfg.spline_order);
  const CarBounds bounds = car_bounds(graph);
  GwdpModel model(curves, basis, graph, bounds, cfg.hyperparams(p), cfg.form());

  FitArtifacts fit;
  fit.trace = std::move(trace);
  fit.lpml = cpo_lpml(fit.trace, model);
  fit.lpml.h = cfg.h;
  fit.summary = summarize(fit.trace, model);
  fit.p = p;
  fit.h = cfg.h;
  fit.region_ids = curves.region_ids;

  if (!out_summary.empty()) write_atomic(out_summary, summary_json(fit, cfg));
  if (!out_mean_curves_csv.empty()) {
    std::ostringstream out;
    out << "# config " << cfg.to_json() << "\n";
    out << "cluster,t,value\n";
    for (size_t c = 0; c < fit.summary.mean_curves.size(); ++c)
      for (int t = 0; t < fit.summary.mean_curves[c].size(); ++t)
        out << c + 1 << ',' << csv::format_double(curves.grid(t)) << ','
            << csv::format_double(fit.summary.mean_curves[c](t)) << "\n";
    write_atomic(out_mean_curves_csv, out.str());
  }
}

}  // namespace scc
