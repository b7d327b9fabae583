#pragma once

// Internal helpers shared by the sweep-plan and train-config readers.

#include <json.hpp>

#include "intentnet/autoencoder.hpp"
#include "intentnet/classifier.hpp"
#include "intentnet/errors.hpp"

namespace intentnet::detail {

inline std::vector<std::size_t> parse_widths(const nlohmann::json& arr,
                                             const char* what) {
  if (!arr.is_array()) {
    throw Error(Errc::InvalidConfig, std::string(what) + " must be an array");
  }
  std::vector<std::size_t> out;
  for (const auto& v : arr) {
    out.push_back(v.get<std::size_t>());
  }
  return out;
}

inline AEConfig parse_ae_config(const nlohmann::json& node) {
  AEConfig config;
  config.hidden = parse_widths(node.at("hidden"), "ae hidden");
  config.embedding_dim = node.at("embedding").get<std::size_t>();
  config.epochs = node.value("epochs", std::size_t{1000});
  config.batch_size = node.value("batch", std::size_t{1024});
  if (node.contains("optimizer")) {
    config.optimizer = OptimizerConfig::defaults(
        optimizer_from(node.at("optimizer").get<std::string>()));
  }
  if (node.contains("learning_rate")) {
    config.optimizer.learning_rate = node.at("learning_rate").get<double>();
  }
  return config;
}

inline MLPConfig parse_mlp_config(const nlohmann::json& node) {
  MLPConfig config;
  config.hidden = parse_widths(node.at("hidden"), "mlp hidden");
  config.epochs = node.value("epochs", std::size_t{100});
  config.batch_size = node.value("batch", std::size_t{1024});
  if (node.contains("optimizer")) {
    config.optimizer = OptimizerConfig::defaults(
        optimizer_from(node.at("optimizer").get<std::string>()));
  }
  if (node.contains("learning_rate")) {
    config.optimizer.learning_rate = node.at("learning_rate").get<double>();
  }
  return config;
}

}  // namespace intentnet::detail
