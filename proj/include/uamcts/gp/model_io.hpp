#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "uamcts/gp/gp_model.hpp"

namespace uamcts::gp {

inline nlohmann::json to_json(const KernelParams& p) {
  return {{"dot_sigma0_sq", p.dot_sigma0_sq},
          {"rq_scale", p.rq_scale},
          {"rq_alpha", p.rq_alpha},
          {"noise_var", p.noise_var}};
}

inline KernelParams kernel_params_from_json(const nlohmann::json& j) {
  KernelParams p;
  p.dot_sigma0_sq = j.at("dot_sigma0_sq").get<double>();
  p.rq_scale = j.at("rq_scale").get<double>();
  p.rq_alpha = j.at("rq_alpha").get<double>();
  p.noise_var = j.at("noise_var").get<double>();
  p.validate();
  return p;
}

/// {kernel_params, feature_scaler, target_scaler, dataset}; the
/// factorization is recomputed on load.
inline nlohmann::json to_json(const GpModel& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& s : m.dataset().points())
    rows.push_back({{"level", s.feature.level},
                    {"alpha", s.feature.alpha},
                    {"duration", s.feature.duration},
                    {"next_level", s.next_level}});
  return {{"kernel_params", to_json(m.params())},
          {"feature_scaler", {{"offset", m.scaler().offset}, {"scale", m.scaler().scale}}},
          {"target_scaler", {{"offset", m.target_scaler().offset}, {"scale", m.target_scaler().scale}}},
          {"dataset", rows}};
}

inline GpModel model_from_json(const nlohmann::json& j) {
  const auto params = kernel_params_from_json(j.at("kernel_params"));
  FeatureScaler scaler;
  scaler.offset = j.at("feature_scaler").at("offset").get<std::array<double, kFeatureDim>>();
  scaler.scale = j.at("feature_scaler").at("scale").get<std::array<double, kFeatureDim>>();
  std::vector<Sample> rows;
  for (const auto& r : j.at("dataset"))
    rows.push_back({{r.at("level").get<double>(), r.at("alpha").get<double>(), r.at("duration").get<double>()},
                    r.at("next_level").get<double>()});
  Dataset data(std::move(rows));
  TargetScaler target = TargetScaler::fit(data);
  if (j.contains("target_scaler")) {
    target.offset = j.at("target_scaler").at("offset").get<double>();
    target.scale = j.at("target_scaler").at("scale").get<double>();
  }
  return GpModel::fit(data, params, scaler, target);
}

inline void save_model(const std::string& path, const GpModel& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << to_json(m).dump(2) << '\n';
  if (!os) throw std::runtime_error("write failed for '" + path + "'");
}

inline GpModel load_model(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open '" + path + "'");
  return model_from_json(nlohmann::json::parse(is));
}

}  // namespace uamcts::gp
