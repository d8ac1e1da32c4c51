#pragma once

// JSON run configuration: parsing with validation, serialization, and the
// mapping onto a ProblemSpec.  An empty document yields the subdiffusion
// baseline (alpha = 1/2, gamma = 2, N = 100, T = 5 on (-5,15) with the
// narrow Gaussian), which is the default experiment setup.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracfp/models.hpp"

namespace fracfp {

/// Thrown on malformed or invalid configuration documents.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RunConfig {
    double alpha = 0.5;
    double gamma = 2.0;
    std::size_t steps = 100;    // N
    double T = 5.0;
    std::array<double, 2> domain{-5.0, 15.0};
    std::size_t nx = 20480;
    double D = 1.0;

    ForceKind force_kind = ForceKind::Zero;
    std::vector<double> force_params;

    InitialKind initial_kind = InitialKind::Gaussian;
    std::vector<double> initial_params{0.1, 2.0}; // gaussian: [sigma, mu]

    bool source_custom = false;
    std::array<double, 7> source_coeffs{};

    ModelVariant variant = ModelVariant::RiemannLiouville;
    BoundaryTreatment boundary = BoundaryTreatment::Dirichlet;

    std::vector<double> snapshot_times{0.02, 0.045, 0.08, 0.125, 0.245, 0.5};
    std::string output_dir = "out";

    bool operator==(const RunConfig&) const = default;
};

namespace detail {

inline const char* force_kind_name(ForceKind k) {
    switch (k) {
        case ForceKind::Zero: return "zero";
        case ForceKind::SinTPlusX: return "sin_t_plus_x";
        case ForceKind::SinXPlusT: return "sin_x_plus_t";
        case ForceKind::AffineInT: return "affine_in_t";
        case ForceKind::Custom: return "custom";
    }
    return "zero";
}

inline ForceKind force_kind_from(const std::string& s) {
    if (s == "zero") return ForceKind::Zero;
    if (s == "sin_t_plus_x") return ForceKind::SinTPlusX;
    if (s == "sin_x_plus_t") return ForceKind::SinXPlusT;
    if (s == "affine_in_t") return ForceKind::AffineInT;
    if (s == "custom") return ForceKind::Custom;
    throw ConfigError("unknown force kind '" + s + "'");
}

inline const char* initial_kind_name(InitialKind k) {
    switch (k) {
        case InitialKind::Gaussian: return "gaussian";
        case InitialKind::SineMode: return "sine_mode";
        case InitialKind::NodalVector: return "nodal_vector";
    }
    return "gaussian";
}

inline InitialKind initial_kind_from(const std::string& s) {
    if (s == "gaussian") return InitialKind::Gaussian;
    if (s == "sine_mode") return InitialKind::SineMode;
    if (s == "nodal_vector") return InitialKind::NodalVector;
    throw ConfigError("unknown initial kind '" + s + "'");
}

} // namespace detail

/// Checks every invariant of the underlying types; error messages name the
/// violated constraint.
inline void validate_config(const RunConfig& cfg) {
    if (!(cfg.alpha > 0.0) || !(cfg.alpha <= 1.0))
        throw ConfigError("alpha must lie in (0,1]");
    if (!(cfg.gamma >= 1.0)) throw ConfigError("gamma must be >= 1");
    if (cfg.steps < 1) throw ConfigError("N must be >= 1");
    if (!(cfg.T > 0.0)) throw ConfigError("T must be positive");
    if (!(cfg.domain[0] < cfg.domain[1])) throw ConfigError("domain must satisfy a < b");
    if (cfg.nx < 2) throw ConfigError("nx must be >= 2");
    if (!(cfg.D > 0.0)) throw ConfigError("D must be positive");

    switch (cfg.force_kind) {
        case ForceKind::Zero:
        case ForceKind::SinTPlusX:
        case ForceKind::SinXPlusT:
            if (!cfg.force_params.empty()) throw ConfigError("force kind takes no params");
            break;
        case ForceKind::AffineInT:
            if (cfg.force_params.size() != 2)
                throw ConfigError("force kind affine_in_t takes params [a, b]");
            break;
        case ForceKind::Custom:
            if (cfg.force_params.size() != 7)
                throw ConfigError("force kind custom takes 7 coefficients");
            break;
    }

    switch (cfg.initial_kind) {
        case InitialKind::Gaussian:
            if (cfg.initial_params.size() != 2)
                throw ConfigError("initial kind gaussian takes params [sigma, mu]");
            if (!(cfg.initial_params[0] > 0.0)) throw ConfigError("gaussian sigma must be positive");
            break;
        case InitialKind::SineMode:
            if (cfg.initial_params.size() != 1 || cfg.initial_params[0] < 1.0 ||
                cfg.initial_params[0] != std::floor(cfg.initial_params[0]))
                throw ConfigError("initial kind sine_mode takes params [wavenumber >= 1]");
            break;
        case InitialKind::NodalVector:
            if (cfg.initial_params.size() != cfg.nx + 1)
                throw ConfigError("initial kind nodal_vector takes nx+1 values");
            break;
    }

    for (double t : cfg.snapshot_times)
        if (t < 0.0 || t > cfg.T) throw ConfigError("snapshot_times must lie within [0, T]");
}

/// Parse a JSON configuration document; absent keys take the baseline
/// defaults.  Unknown keys are rejected so typos cannot silently fall back.
inline RunConfig parse_config(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = text.empty() ? nlohmann::json::object() : nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("config document must be a JSON object");

    RunConfig cfg;
    try {
        for (const auto& [key, value] : doc.items()) {
            if (key == "alpha") cfg.alpha = value.get<double>();
            else if (key == "gamma") cfg.gamma = value.get<double>();
            else if (key == "N") cfg.steps = value.get<std::size_t>();
            else if (key == "T") cfg.T = value.get<double>();
            else if (key == "domain") {
                if (!value.is_array() || value.size() != 2)
                    throw ConfigError("domain must be [a, b]");
                cfg.domain = {value[0].get<double>(), value[1].get<double>()};
            } else if (key == "nx") cfg.nx = value.get<std::size_t>();
            else if (key == "D") cfg.D = value.get<double>();
            else if (key == "force") {
                cfg.force_kind = detail::force_kind_from(value.value("kind", "zero"));
                cfg.force_params = value.value("params", std::vector<double>{});
                for (const auto& [k2, v2] : value.items())
                    if (k2 != "kind" && k2 != "params")
                        throw ConfigError("unknown force key '" + k2 + "'");
            } else if (key == "initial") {
                cfg.initial_kind = detail::initial_kind_from(value.value("kind", "gaussian"));
                cfg.initial_params = value.value("params", std::vector<double>{0.1, 2.0});
                for (const auto& [k2, v2] : value.items())
                    if (k2 != "kind" && k2 != "params")
                        throw ConfigError("unknown initial key '" + k2 + "'");
            } else if (key == "source") {
                const std::string kind = value.value("kind", "zero");
                if (kind == "zero") {
                    cfg.source_custom = false;
                } else if (kind == "custom") {
                    cfg.source_custom = true;
                    const auto params = value.value("params", std::vector<double>{});
                    if (params.size() != 7)
                        throw ConfigError("source kind custom takes 7 coefficients");
                    for (std::size_t i = 0; i < 7; ++i) cfg.source_coeffs[i] = params[i];
                } else {
                    throw ConfigError("unknown source kind '" + kind + "'");
                }
            } else if (key == "variant") {
                const std::string v = value.get<std::string>();
                if (v == "riemann_liouville") cfg.variant = ModelVariant::RiemannLiouville;
                else if (v == "caputo_left") cfg.variant = ModelVariant::CaputoLeft;
                else throw ConfigError("variant must be riemann_liouville or caputo_left");
            } else if (key == "boundary") {
                const std::string v = value.get<std::string>();
                if (v == "dirichlet") cfg.boundary = BoundaryTreatment::Dirichlet;
                else if (v == "natural") cfg.boundary = BoundaryTreatment::Natural;
                else throw ConfigError("boundary must be dirichlet or natural");
            } else if (key == "snapshot_times") {
                cfg.snapshot_times = value.get<std::vector<double>>();
            } else if (key == "output_dir") {
                cfg.output_dir = value.get<std::string>();
            } else {
                throw ConfigError("unknown config key '" + key + "'");
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }

    validate_config(cfg);
    return cfg;
}

/// Serialize with a fixed key order; parse_config(serialize(c)) == c.
inline std::string serialize(const RunConfig& cfg) {
    nlohmann::ordered_json doc;
    doc["alpha"] = cfg.alpha;
    doc["gamma"] = cfg.gamma;
    doc["N"] = cfg.steps;
    doc["T"] = cfg.T;
    doc["domain"] = cfg.domain;
    doc["nx"] = cfg.nx;
    doc["D"] = cfg.D;
    doc["force"] = {{"kind", detail::force_kind_name(cfg.force_kind)},
                    {"params", cfg.force_params}};
    doc["initial"] = {{"kind", detail::initial_kind_name(cfg.initial_kind)},
                      {"params", cfg.initial_params}};
    if (cfg.source_custom)
        doc["source"] = {{"kind", "custom"},
                         {"params", std::vector<double>(cfg.source_coeffs.begin(),
                                                        cfg.source_coeffs.end())}};
    else
        doc["source"] = {{"kind", "zero"}};
    doc["variant"] =
        cfg.variant == ModelVariant::RiemannLiouville ? "riemann_liouville" : "caputo_left";
    doc["boundary"] = cfg.boundary == BoundaryTreatment::Dirichlet ? "dirichlet" : "natural";
    doc["snapshot_times"] = cfg.snapshot_times;
    doc["output_dir"] = cfg.output_dir;
    return doc.dump(2);
}

/// Build the solver-facing problem from a validated configuration.
inline ProblemSpec to_problem_spec(const RunConfig& cfg) {
    validate_config(cfg);
    ProblemSpec spec;
    spec.alpha = FractionalOrder(cfg.alpha);
    spec.D = cfg.D;
    spec.grid = uniform_space_grid(cfg.domain[0], cfg.domain[1], cfg.nx);
    spec.tmesh = graded_time_mesh(cfg.steps, cfg.gamma, cfg.T);
    spec.force = make_force(cfg.force_kind, cfg.force_params);

    spec.initial.kind = cfg.initial_kind;
    switch (cfg.initial_kind) {
        case InitialKind::Gaussian:
            spec.initial.sigma = cfg.initial_params[0];
            spec.initial.mu = cfg.initial_params[1];
            break;
        case InitialKind::SineMode:
            spec.initial.wavenumber = static_cast<int>(cfg.initial_params[0]);
            break;
        case InitialKind::NodalVector:
            spec.initial.values = cfg.initial_params;
            break;
    }

    if (cfg.source_custom) {
        const std::array<double, 7> c = cfg.source_coeffs;
        spec.source = [c](double x, double t) {
            return c[0] + c[1] * x + c[2] * t + c[3] * std::sin(x) + c[4] * std::sin(t) +
                   c[5] * std::cos(x) + c[6] * std::cos(t);
        };
    }

    spec.variant = cfg.variant;
    spec.boundary = cfg.boundary;
    return spec;
}

} // namespace fracfp
