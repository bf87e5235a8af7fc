#pragma once

#include "dwlab/data_family.hpp"
#include "dwlab/fit.hpp"
#include "dwlab/lab/config.hpp"
#include "dwlab/lifespan_formulas.hpp"
#include "dwlab/odi.hpp"
#include "dwlab/propagators.hpp"
#include "dwlab/solver.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace dwlab::lab {

enum class Verdict { pass, fail, unconverged };

std::string_view to_string(Verdict v);
/// Exit status: pass 0, fail 1, unconverged 2.
int exit_code(Verdict v);
/// The worst of the two (unconverged > fail > pass).
Verdict combine(Verdict a, Verdict b);

struct RunRecord {
    double p = 0.0;
    double eps = 0.0;
    MomentClass moment_class = MomentClass::m0_nonzero;
    LifespanEstimate estimate;
    FunctionalTrace trace;
};

nlohmann::json to_json(const RunRecord& r);

struct SweepRow {
    double eps = 0.0;
    double T_low = 0.0;
    double T_high = 0.0;
    LifespanStatus status = LifespanStatus::survived_horizon;
};

inline constexpr double kMinLambertR2 = 0.95;

struct SweepReport {
    double p = 0.0;
    MomentClass moment_class = MomentClass::m0_nonzero;
    LifespanRegime regime = LifespanRegime::classical;
    std::vector<SweepRow> rows;
    std::optional<ExponentFit> fit;      ///< power-law fit of T_high (absent when a row did not blow up)
    std::optional<LambertFit> lambert;   ///< critical regime only
    double predicted_slope = 0.0;        ///< NaN in the critical regime
    double tolerance = 0.0;              ///< absolute slope band
    Verdict verdict = Verdict::unconverged;
};

/// Fits T_high against eps and decides the verdict from the rows alone:
///   any truncation_abort -> unconverged; any survived_horizon -> fail;
///   power-law regimes pass when |slope - predicted| <= rel_tol |predicted|;
///   the critical regime passes when the Lambert fit reaches r^2 >= 0.95.
SweepReport assess_sweep(double p, MomentClass moment_class, std::vector<SweepRow> rows,
                         double rel_tol);

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);
std::vector<SweepRow> read_sweep_csv(std::istream& is);
nlohmann::json to_json(const SweepReport& r);

nlohmann::json to_json(const ExponentFit& f);
nlohmann::json to_json(const ExperimentConfig& cfg);

/// Decay table row: one data family under S(t) or one heat residual.
struct DecayRow {
    std::string label;
    double target_slope = 0.0;
    double band = 0.05;
    DecayReport report;
    bool within_band = false;  ///< |slope - target| <= band and the fit is accepted
};

struct DecaySummary {
    double p = 2.0;
    std::vector<DecayRow> rows;
    Verdict verdict = Verdict::fail;
};

void write_decay_csv(std::ostream& os, const DecayReport& r);
nlohmann::json to_json(const DecaySummary& s);

enum class CheckStatus { pass, fail, skipped };
std::string_view to_string(CheckStatus s);

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    CheckStatus status = CheckStatus::fail;
    std::string note;
};

nlohmann::json to_json(const CheckRow& r);
Verdict verdict_of(std::span<const CheckRow> rows);

struct PredictionRow {
    double p = 0.0;
    double eps = 0.0;
    MomentClass moment_class = MomentClass::m0_nonzero;
    LifespanPrediction prediction;
    std::optional<double> crossover;  ///< root of the crossover equation (p < 3 only)
};

nlohmann::json to_json(const PredictionRow& r);

struct OdiReport {
    double p = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    ExponentFit fit;
    double target_slope = 0.0;
    double rel_tol = 0.1;
    std::vector<double> eps;
    std::vector<double> blowup_times;
    Verdict verdict = Verdict::fail;
};

nlohmann::json to_json(const OdiReport& r);

}  // namespace dwlab::lab
