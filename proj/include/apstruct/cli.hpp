#pragma once

// Batch front-end: JSON run configurations, the verify/table/sweep commands and
// their report files. Commands return the process exit code:
//   0  every asserted check passed
//   1  at least one asserted residual failed
//   2  usage or configuration error (diagnostic written to `err`)

#include "apstruct/normality.hpp"
#include "apstruct/verify.hpp"

#include <nlohmann/json.hpp>

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace apstruct::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;

struct NormalitySettings {
    int n_points = 20;
    int n_fields = 5;
    int n_probes = 5;
    double det_threshold = 1e-3;
};

struct RunConfig {
    Family family = Family::Hypersphere;
    Shape shape{1, 1};
    RadiiInput radii;
    SignPattern signs;
    std::uint64_t seed = 1;
    int n_points = 1000;
    int n_vectors = 10;
    ToleranceMap tolerances;
    FDConfig fd;
    NormalitySettings normality;

    // Execution settings. They never appear in reports.
    unsigned threads = 0;
    std::string json_path = "report.json";
    std::string csv_path = "report.csv";

    [[nodiscard]] SubmanifoldSpec spec() const { return SubmanifoldSpec::make(family, shape, radii); }
};

/// Parses and validates a configuration document. Unknown keys are rejected.
/// Throws ConfigError (or nlohmann::json::exception) on invalid input.
RunConfig parse_config(const nlohmann::json& j);
RunConfig load_config(const std::string& path);

/// Normalized configuration with every default spelled out; execution
/// settings (threads, output paths) are omitted.
nlohmann::json config_to_json(const RunConfig& cfg);

/// The full verification: structure identities, agreement, normality and
/// Weingarten sweeps.
ResidualReport run_verification(const RunConfig& cfg);

/// Report document written by `verify`: {"config": ..., "report": ...}.
nlohmann::json verify_document(const RunConfig& cfg, const ResidualReport& report);

/// Serialized JSON text exactly as written to disk.
std::string dump_document(const nlohmann::json& doc);

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

struct TableData {
    SubmanifoldSpec spec;
    AmbientVector pt;
    RadiiAtPoint radii;
    std::vector<std::string> u_formulas;
    InducedStructure oracle;
    std::optional<InducedStructure> closed;
    double det_i_minus_a2 = 0;
    /// max |closed - oracle| over a and xi; 0 when no closed form exists.
    double max_deviation = 0;
};

/// Throws DomainError when pt is off the manifold.
TableData build_table(const RunConfig& cfg, const AmbientVector& pt);
std::string format_table(const TableData& t);
/// Comma-separated coordinates in (x, y, z) order.
AmbientVector parse_point(const std::string& text, Shape shape);

int cmd_table(const RunConfig& cfg, const std::string& point, std::ostream& out, std::ostream& err);

/// Sweep parameters: hypersphere R; double_product r, r3; triple_product r1,
/// r2, r3, r1_r2_ratio (r held fixed); any family eps, h.
const std::vector<std::string>& sweep_parameters(Family family);
std::vector<double> parse_grid(const std::string& text);
/// The configuration for one sweep cell. Throws ConfigError for an unknown
/// parameter or an invalid value.
RunConfig sweep_cell(const RunConfig& base, const std::string& param, double value);

int cmd_sweep(const RunConfig& cfg, const std::string& param, const std::string& grid, std::ostream& out,
              std::ostream& err);

}  // namespace apstruct::cli
