#pragma once

// Problem-file ingestion: a JSON document holding the two metrics, the
// distinguished tensor field, optional world-force data, initial data,
// integration parameters and the sampling configuration used by
// verification. Expressions stay strings in the expression grammar.

#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "jetflow/field.hpp"
#include "jetflow/jetpoint.hpp"

namespace jetflow {

struct InitialData {
    Vec t0;
    Vec x0;
    std::optional<Mat> v0; // n x p
};

struct IntegrationParams {
    double step = 1e-3;
    std::size_t n_steps = 1000;
    std::vector<double> grid_steps;        // sheets, per axis
    std::vector<std::size_t> grid_counts;  // sheets, per axis
};

struct SampleConfig {
    std::size_t count = 100;
    std::uint64_t seed = 20260809;
    std::vector<std::pair<double, double>> t_box; // per alpha
    std::vector<std::pair<double, double>> x_box; // per i
    std::pair<double, double> v_range{-2.0, 2.0};
};

struct Problem {
    std::size_t p = 0, n = 0;
    std::shared_ptr<const MetricSpec> h, g;
    DistTensorField field;
    std::optional<WorldForceSpec> world_force;
    std::optional<InitialData> initial;
    IntegrationParams integration;
    SampleConfig samples;
    std::string path;
};

/// Parses and structurally validates a problem file; throws InputError with
/// a description of the offending key.
Problem load_problem(const std::string& path);

/// Deterministic sample points from the problem's sampling configuration.
std::vector<EvalPoint> sample_base_points(const Problem& pr, std::size_t count);
std::vector<JetPoint> sample_jet_points(const Problem& pr, std::size_t count,
                                        bool on_shell = false);

/// Semantic validation at sampled points: metric symmetry is structural, so
/// this checks invertibility and the declared signatures. Throws on failure.
void validate_problem(const Problem& pr);

} // namespace jetflow
