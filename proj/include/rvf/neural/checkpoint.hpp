#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "rvf/neural/model.hpp"
#include "rvf/neural/scaler.hpp"
#include "rvf/neural/train.hpp"
#include "rvf/vendor_json.hpp"

namespace rvf::neural {

struct Checkpoint {
    RecurrentModel model;
    RangeScaler scaler;
    TrainConfig config;
    std::size_t sequence_length = 12;
};

/// Weights are stored as flat row-major arrays next to their shapes.
inline nlohmann::json to_json(const Checkpoint& ck) {
    const auto& a = ck.model.architecture();
    nlohmann::json j;
    j["kind"] = std::string(to_string(a.kind));
    j["architecture"] = {{"input_features", a.input_features}, {"hidden_units", a.hidden_units},
                         {"dense_units", a.dense_units},       {"output_days", a.output_days},
                         {"dropout_rate", a.dropout_rate},     {"leaky_slope", a.leaky_slope},
                         {"sequence_length", ck.sequence_length}};
    auto& tensors = j["tensors"] = nlohmann::json::array();
    for (const auto& t : ck.model.tensors()) {
        std::vector<double> flat;
        flat.reserve(static_cast<std::size_t>(t.value.size()));
        for (Eigen::Index r = 0; r < t.value.rows(); ++r)
            for (Eigen::Index c = 0; c < t.value.cols(); ++c) flat.push_back(t.value(r, c));
        tensors.push_back({{"name", t.name}, {"shape", {t.value.rows(), t.value.cols()}}, {"values", flat}});
    }
    j["scaler"] = {{"min", ck.scaler.observed_min}, {"max", ck.scaler.observed_max}};
    j["config"] = {{"learning_rate", ck.config.learning_rate}, {"epochs", ck.config.epochs},
                   {"batch_size", ck.config.batch_size},       {"early_stop_patience", ck.config.early_stop_patience},
                   {"early_stop_min_delta", ck.config.early_stop_min_delta}, {"clip_norm", ck.config.clip_norm}};
    j["seed"] = ck.config.seed;
    return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
    Checkpoint ck;
    const auto& a = j.at("architecture");
    Architecture arch;
    arch.kind = parse_cell_kind(j.at("kind").get<std::string>());
    arch.input_features = a.at("input_features").get<std::size_t>();
    arch.hidden_units = a.at("hidden_units").get<std::size_t>();
    arch.dense_units = a.at("dense_units").get<std::size_t>();
    arch.output_days = a.at("output_days").get<std::size_t>();
    arch.dropout_rate = a.at("dropout_rate").get<double>();
    arch.leaky_slope = a.at("leaky_slope").get<double>();
    ck.sequence_length = a.at("sequence_length").get<std::size_t>();
    ck.model = RecurrentModel(arch);
    const auto& tensors = j.at("tensors");
    if (tensors.size() != ck.model.tensors().size()) throw std::invalid_argument("checkpoint: tensor count mismatch");
    for (std::size_t i = 0; i < tensors.size(); ++i) {
        auto& dst = ck.model.tensors()[i];
        const auto& src = tensors[i];
        if (src.at("name").get<std::string>() != dst.name) throw std::invalid_argument("checkpoint: tensor order mismatch");
        const auto shape = src.at("shape").get<std::vector<Eigen::Index>>();
        if (shape.size() != 2 || shape[0] != dst.value.rows() || shape[1] != dst.value.cols())
            throw std::invalid_argument("checkpoint: shape mismatch for " + dst.name);
        const auto flat = src.at("values").get<std::vector<double>>();
        if (flat.size() != static_cast<std::size_t>(dst.value.size()))
            throw std::invalid_argument("checkpoint: value count mismatch for " + dst.name);
        std::size_t k = 0;
        for (Eigen::Index r = 0; r < dst.value.rows(); ++r)
            for (Eigen::Index c = 0; c < dst.value.cols(); ++c) dst.value(r, c) = flat[k++];
    }
    ck.scaler.observed_min = j.at("scaler").at("min").get<double>();
    ck.scaler.observed_max = j.at("scaler").at("max").get<double>();
    const auto& c = j.at("config");
    ck.config.learning_rate = c.at("learning_rate").get<double>();
    ck.config.epochs = c.at("epochs").get<std::size_t>();
    ck.config.batch_size = c.at("batch_size").get<std::size_t>();
    ck.config.early_stop_patience = c.at("early_stop_patience").get<std::size_t>();
    ck.config.early_stop_min_delta = c.at("early_stop_min_delta").get<double>();
    ck.config.clip_norm = c.at("clip_norm").get<double>();
    ck.config.seed = j.at("seed").get<std::uint64_t>();
    return ck;
}

} // namespace rvf::neural
