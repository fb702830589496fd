#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rislab/ast.hpp"
#include "rislab/config.hpp"
#include "rislab/montecarlo.hpp"
#include "rislab/optimize.hpp"

namespace rislab {

/// Raised on malformed experiment files; the message carries the field path.
struct SpecError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class ExperimentKind { sweep, optimizer };

/// One curve = named overrides applied on top of the fixed config.
using CurveOverrides = std::vector<std::pair<std::string, double>>;

/// A sweep description parsed from a flat key-value spec file: one sweep
/// variable, optional per-curve overrides, and the list of series to run.
struct ExperimentSpec {
    std::string name = "experiment";
    ExperimentKind kind = ExperimentKind::sweep;
    Scenario scenario = Scenario::external;
    std::string sweep_var = "m";  // one of m, b, p_g_dbw, n_elements, a_a, delta
    double sweep_start = 0.0;
    double sweep_stop = 0.0;
    double sweep_step = 1.0;
    std::vector<AstKind> series;
    std::vector<CurveOverrides> curves;  // empty = single unmodified curve

    SystemConfig system;
    NomaConfig noma;
    bool has_noma = false;
    SecrecyCode code;
    SimPlan plan;

    std::optional<OptConstraints> constraints;  // optimizer kind only
    int m_lo = 50;
    int m_hi = 2000;

    std::vector<double> sweep_values() const;
    void validate() const;
};

ExperimentSpec parse_experiment(const std::string& text);
std::string serialize_experiment(const ExperimentSpec& spec);

struct ResultRow {
    std::string sweep_var;
    double sweep_value = 0.0;
    std::string series;
    std::optional<double> ast_bpcu;
    std::optional<double> sem;
    std::optional<double> eps_bar;
    std::optional<int> m_star;
    std::string notes;
};

struct ResultTable {
    std::string name;
    std::string provenance;  // version, seed, config hash
    std::vector<ResultRow> rows;
    std::string summary;  // human-readable trend notes (optimizer sweeps)

    /// Rendered CSV. The timestamp header line is the only
    /// run-to-run-varying byte and can be suppressed.
    std::string to_csv(bool with_timestamp = true) const;
};

/// Run every (curve x series x sweep point) of a sweep spec. Evaluator
/// failures mark the affected row and the run continues.
ResultTable run_experiment(const ExperimentSpec& spec, int threads = 0);

/// Per-point blocklength optimization along the sweep (p_g_dbw or delta).
ResultTable run_optimizer_sweep(const ExperimentSpec& spec, int threads = 0);

/// Write via a temporary file plus rename.
void write_csv_atomic(const ResultTable& table, const std::string& path);

/// Plot script (gnuplot dialect) for a CSV produced from this spec.
std::string gnuplot_script(const ExperimentSpec& spec, const std::string& csv_filename);

std::string version_string();

}  // namespace rislab
