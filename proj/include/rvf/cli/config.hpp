#pragma once

// JSON run configuration. Unknown keys are errors at every level.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <string>
#include <vector>

#include "rvf/backtest/models.hpp"
#include "rvf/series.hpp"
#include "rvf/vendor_json.hpp"

namespace rvf::cli {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    std::filesystem::path data;
    Frequency frequency = Frequency::daily;
    std::optional<std::size_t> window_size;
    std::optional<double> train_fraction;
    std::vector<backtest::ModelSpec> models;
    std::vector<std::size_t> horizons{1};
    std::uint64_t seed = 0;
    std::size_t sequence_length = 12;
    std::size_t threads = 0;
    std::filesystem::path out;

    /// Explicit window, else the training share of `n` observations, else
    /// the stock 4077 (daily) / 1149 (hourly).
    std::size_t window_for(std::size_t n) const {
        if (window_size) return *window_size;
        if (train_fraction) return static_cast<std::size_t>(*train_fraction * static_cast<double>(n) + 1e-9);
        return frequency == Frequency::hourly ? 1149 : 4077;
    }
};

namespace detail {

inline void only_keys(const nlohmann::json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    for (const auto& [key, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || a == key;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
    }
}

template <class T>
T get(const nlohmann::json& obj, const char* key, const std::string& where) {
    try {
        return obj.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + where);
    }
}

inline std::size_t get_count(const nlohmann::json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0)
        throw ConfigError("'" + std::string(key) + "' in " + where + " must be a non-negative integer");
    return v.get<std::size_t>();
}

inline backtest::ModelSpec parse_model(const nlohmann::json& j, std::size_t sequence_length) {
    if (j.is_string()) {
        try {
            auto m = backtest::default_model(backtest::parse_model_kind(j.get<std::string>()));
            m.neural.sequence_length = sequence_length;
            return m;
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (!j.is_object() || !j.contains("name")) throw ConfigError("models entries must be names or objects with a 'name'");
    backtest::ModelSpec m;
    try {
        m = backtest::default_model(backtest::parse_model_kind(get<std::string>(j, "name", "models")));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    m.neural.sequence_length = sequence_length;
    const std::string where = "model '" + m.name() + "'";
    if (backtest::is_neural(m.kind)) {
        only_keys(j, {"name", "hidden_units", "dense_units", "epochs", "batch_size", "learning_rate", "dropout",
                      "patience", "refit_every"},
                  where);
        auto& a = m.neural.architecture;
        auto& c = m.neural.config;
        if (j.contains("hidden_units")) a.hidden_units = get_count(j, "hidden_units", where);
        if (j.contains("dense_units")) a.dense_units = get_count(j, "dense_units", where);
        if (j.contains("epochs")) c.epochs = get_count(j, "epochs", where);
        if (j.contains("batch_size")) c.batch_size = get_count(j, "batch_size", where);
        if (j.contains("patience")) c.early_stop_patience = get_count(j, "patience", where);
        if (j.contains("learning_rate")) c.learning_rate = get<double>(j, "learning_rate", where);
        if (j.contains("dropout")) a.dropout_rate = get<double>(j, "dropout", where);
        try {
            a.validate();
            c.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where + ": " + e.what());
        }
    } else if (m.kind == backtest::ModelKind::har) {
        only_keys(j, {"name", "betas", "refit_every"}, where);
        if (j.contains("betas")) {
            const auto b = get<std::vector<double>>(j, "betas", where);
            if (b.size() != 4) throw ConfigError(where + ": 'betas' needs 4 values");
            m.har_fixed = econometric::HarParams{b[0], b[1], b[2], b[3]};
        }
    } else {
        only_keys(j, {"name", "refit_every"}, where);
    }
    if (j.contains("refit_every")) {
        m.refit_every = get_count(j, "refit_every", where);
        if (m.refit_every == 0) throw ConfigError(where + ": 'refit_every' must be >= 1");
    }
    return m;
}

} // namespace detail

/// `base` resolves a relative data path (normally the config file's directory).
inline RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base = {}) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    detail::only_keys(j,
                      {"data", "frequency", "window_size", "train_fraction", "models", "horizons", "seed",
                       "sequence_length", "threads", "out"},
                      "config");
    RunConfig c;
    if (!j.contains("data")) throw ConfigError("config needs 'data'");
    c.data = detail::get<std::string>(j, "data", "config");
    if (c.data.is_relative() && !base.empty()) c.data = base / c.data;
    if (!std::filesystem::exists(c.data)) throw ConfigError("data file '" + c.data.string() + "' does not exist");
    if (j.contains("frequency")) {
        const auto f = detail::get<std::string>(j, "frequency", "config");
        if (f != "daily" && f != "hourly") throw ConfigError("frequency must be 'daily' or 'hourly'");
        c.frequency = parse_frequency(f);
    }
    if (j.contains("window_size") && j.contains("train_fraction"))
        throw ConfigError("give either 'window_size' or 'train_fraction', not both");
    if (j.contains("window_size")) {
        c.window_size = detail::get_count(j, "window_size", "config");
        if (*c.window_size < 30) throw ConfigError("'window_size' must be >= 30");
    }
    if (j.contains("train_fraction")) {
        c.train_fraction = detail::get<double>(j, "train_fraction", "config");
        if (!(*c.train_fraction > 0.0 && *c.train_fraction < 1.0))
            throw ConfigError("'train_fraction' must lie in (0, 1)");
    }
    if (j.contains("sequence_length")) {
        c.sequence_length = detail::get_count(j, "sequence_length", "config");
        if (c.sequence_length == 0) throw ConfigError("'sequence_length' must be >= 1");
    }
    if (j.contains("horizons")) {
        if (!j.at("horizons").is_array() || j.at("horizons").empty()) throw ConfigError("'horizons' must be a nonempty array");
        c.horizons.clear();
        for (const auto& h : j.at("horizons")) {
            if (!h.is_number_integer() || h.get<long long>() < 1) throw ConfigError("horizons must be integers >= 1");
            c.horizons.push_back(h.get<std::size_t>());
        }
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        c.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("threads")) c.threads = detail::get_count(j, "threads", "config");
    if (j.contains("out")) c.out = detail::get<std::string>(j, "out", "config");
    if (j.contains("models")) {
        if (!j.at("models").is_array() || j.at("models").empty()) throw ConfigError("'models' must be a nonempty array");
        for (const auto& m : j.at("models")) c.models.push_back(detail::parse_model(m, c.sequence_length));
    } else {
        for (auto name : backtest::kModelNames) c.models.push_back(detail::parse_model(std::string(name), c.sequence_length));
    }
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config is not valid JSON: " + std::string(e.what()));
    }
    return parse_config(j, path.parent_path());
}

} // namespace rvf::cli
