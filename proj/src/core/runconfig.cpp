#include "runconfig.hpp"

#include <json.hpp>

#include "csv.hpp"
#include "curves.hpp"
#include "errors.hpp"

namespace scc {

using nlohmann::json;

namespace {

void apply(RunConfig& c, const json& j) {
  if (!j.is_object()) fail(ErrorCode::Format, "config: expected a JSON object");
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "alpha") c.alpha = value.get<double>();
      else if (key == "mu0") c.mu0 = value.get<double>();
      else if (key == "lambda0") c.lambda0 = value.get<double>();
      else if (key == "nu0") c.nu0 = value.get<double>();
      else if (key == "s0") c.s0 = value.get<double>();
      else if (key == "p") c.p = value.get<int>();
      else if (key == "p_min") c.p_min = value.get<int>();
      else if (key == "p_max") c.p_max = value.get<int>();
      else if (key == "spline_order") c.spline_order = value.get<int>();
      else if (key == "fve_threshold") c.fve_threshold = value.get<double>();
      else if (key == "fpca_denoise") c.fpca_denoise = value.get<bool>();
      else if (key == "h") c.h = value.get<double>();
      else if (key == "h_grid") c.h_grid = value.get<std::vector<double>>();
      else if (key == "disconnected") c.disconnected = value.get<std::string>();
      else if (key == "iterations") c.iterations = value.get<int>();
      else if (key == "burn_in") c.burn_in = value.get<int>();
      else if (key == "thin") c.thin = value.get<int>();
      else if (key == "seed") c.seed = value.get<uint64_t>();
      else if (key == "proposal_sd") c.proposal_sd = value.get<double>();
      else if (key == "adapt_proposal") c.adapt_proposal = value.get<bool>();
      else if (key == "likelihood_form") c.likelihood_form = value.get<std::string>();
      else if (key == "init") c.init = value.get<std::string>();
      else if (key == "fix_phi") {
        if (value.is_null()) c.fix_phi.reset();
        else c.fix_phi = value.get<double>();
      }
      else if (key == "jobs") c.jobs = value.get<int>();
      else fail(ErrorCode::Format, "config: unknown key '" + key + "'");
    } catch (const json::exception& e) {
      fail(ErrorCode::Format, "config: bad value for '" + key + "': " + e.what());
    }
  }
}

void validate(const RunConfig& c) {
  if (!(c.alpha > 0.0)) fail(ErrorCode::InvalidArgument, "config: alpha must be > 0");
  if (!(c.nu0 > 0.0)) fail(ErrorCode::InvalidArgument, "config: nu0 must be > 0");
  if (!(c.s0 > 0.0)) fail(ErrorCode::InvalidArgument, "config: s0 must be > 0");
  if (!(c.lambda0 > 0.0)) fail(ErrorCode::InvalidArgument, "config: lambda0 must be > 0");
  if (c.h < 0.0) fail(ErrorCode::InvalidArgument, "config: h must be >= 0");
  if (c.jobs < 1) fail(ErrorCode::InvalidArgument, "config: jobs must be >= 1");
  if (c.likelihood_form != "conditional" && c.likelihood_form != "independence")
    fail(ErrorCode::InvalidArgument, "config: likelihood_form must be conditional|independence");
  if (c.init != "singletons" && c.init != "single_cluster")
    fail(ErrorCode::InvalidArgument, "config: init must be singletons|single_cluster");
  if (c.disconnected != "sentinel" && c.disconnected != "zero")
    fail(ErrorCode::InvalidArgument, "config: disconnected must be sentinel|zero");
  c.mcmc().validate();
}

}  // namespace

RunConfig RunConfig::from_json_text(const std::string& text) {
  RunConfig c;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorCode::Format, std::string("config: invalid JSON: ") + e.what());
  }
  apply(c, j);
  validate(c);
  return c;
}

RunConfig RunConfig::load(const std::string& config_path, const std::string& overrides_json) {
  RunConfig c;
  if (!config_path.empty()) {
    json j;
    try {
      j = json::parse(csv::read_text(config_path));
    } catch (const json::exception& e) {
      fail(ErrorCode::Format, config_path + ": invalid JSON: " + e.what());
    }
    apply(c, j);
  }
  if (!overrides_json.empty()) apply(c, json::parse(overrides_json));
  validate(c);
  return c;
}

std::string RunConfig::to_json() const {
  json j;
  j["alpha"] = alpha;
  j["mu0"] = mu0;
  j["lambda0"] = lambda0;
  j["nu0"] = nu0;
  j["s0"] = s0;
  j["p"] = p;
  j["p_min"] = p_min;
  j["p_max"] = p_max;
  j["spline_order"] = spline_order;
  j["fve_threshold"] = fve_threshold;
  j["fpca_denoise"] = fpca_denoise;
  j["h"] = h;
  j["h_grid"] = h_grid;
  j["disconnected"] = disconnected;
  j["iterations"] = iterations;
  j["burn_in"] = burn_in;
  j["thin"] = thin;
  j["seed"] = seed;
  j["proposal_sd"] = proposal_sd;
  j["adapt_proposal"] = adapt_proposal;
  j["likelihood_form"] = likelihood_form;
  j["init"] = init;
  if (fix_phi) j["fix_phi"] = *fix_phi;
  else j["fix_phi"] = nullptr;
  j["jobs"] = jobs;
  return j.dump();
}

McmcConfig RunConfig::mcmc() const {
  McmcConfig m;
  m.iterations = iterations;
  m.burn_in = burn_in;
  m.thin = thin;
  m.seed = seed;
  m.proposal_sd = proposal_sd;
  m.adapt_proposal = adapt_proposal;
  m.likelihood_form = form();
  m.init = (init == "singletons") ? InitMode::kSingletons : InitMode::kSingleCluster;
  m.fix_phi = fix_phi;
  return m;
}

LikelihoodForm RunConfig::form() const {
  return likelihood_form == "independence" ? LikelihoodForm::kIndependence
                                           : LikelihoodForm::kConditional;
}

DisconnectedPolicy RunConfig::disconnected_policy() const {
  return disconnected == "zero" ? DisconnectedPolicy::kZeroWeight
                                : DisconnectedPolicy::kSentinelHops;
}

Hyperparams RunConfig::hyperparams(int p_resolved) const {
  Hyperparams hp;
  hp.mu0 = Eigen::VectorXd::Constant(p_resolved, mu0);
  hp.lambda0 = lambda0 * Eigen::MatrixXd::Identity(p_resolved, p_resolved);
  hp.nu0 = nu0;
  hp.s0sq = s0 * s0;
  hp.alpha = alpha;
  hp.h = h;
  return hp;
}

int RunConfig::resolve_p(const CurveMatrix& curves) const {
  if (p > 0) return p;
  FpcaOptions opt;
  opt.fve_threshold = fve_threshold;
  opt.denoise = fpca_denoise;
  const int auto_p = fpca_select_p(curves, opt);
  return std::clamp(auto_p, std::max(p_min, spline_order), p_max);
}

}  // namespace scc
