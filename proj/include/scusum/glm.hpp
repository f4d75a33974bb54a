#pragma once

#include "scusum/calendar.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace scusum {

/// Which calendar factors enter the daily-count regression.
///
/// Column order is fixed: intercept, weekday flag, days since origin, month
/// dummies (Feb..Dec, January is the reference), day-of-week dummies (Tue..Sat,
/// Monday is the reference; Sunday is never open), day-after-holiday flag.
struct FactorSpec {
  bool weekday_flag = false;
  bool trend = false;
  bool month = false;
  bool day_of_week = false;
  bool day_after_holiday = false;

  std::size_t columns() const;
  std::vector<std::string> column_names() const;
  std::string label() const;

  bool operator==(const FactorSpec&) const = default;
};

// The five nested candidates compared when choosing the daily model.
std::vector<FactorSpec> default_candidates();

std::vector<double> encode_features(const DayMeta& meta, const FactorSpec& spec);

struct DesignRow {
  std::vector<double> features;
  std::int64_t count = 0;
};

struct DayCount {
  DayMeta meta;
  std::int64_t count = 0;
};

std::vector<DesignRow> design_rows(std::span<const DayCount> days, const FactorSpec& spec);

struct GlmModel {
  FactorSpec spec;
  std::vector<double> coefficients;
  double log_likelihood = 0.0;
  double deviance = 0.0;
  double bic = 0.0;
  std::size_t n_obs = 0;
  int iterations = 0;
  double score_max_norm = 0.0;

  double linear_predictor(std::span<const double> features) const;
  // Expected daily count exp(x . coefficients).
  double predict(const DayMeta& meta) const;

  bool operator==(const GlmModel&) const = default;
};

struct IrlsOptions {
  int max_iterations = 100;
  double score_tolerance = 1e-8;
  double deviance_tolerance = 1e-10;
};

/// Poisson regression with log link by iteratively reweighted least squares.
///
/// Starts from intercept = ln(mean + 0.1), other coefficients 0, and stops
/// when the max-norm of the score drops below `score_tolerance` or the
/// relative deviance change below `deviance_tolerance`. Throws
/// SingularDesignError (naming the dependent columns) for rank-deficient
/// designs and ConvergenceError after `max_iterations`.
GlmModel fit_poisson_glm(std::span<const DesignRow> rows, const FactorSpec& spec,
                         const IrlsOptions& options = {});

GlmModel fit_daily_glm(std::span<const DayCount> days, const FactorSpec& spec,
                       const IrlsOptions& options = {});

double information_criterion(double k, double n, double log_likelihood);
double bic(const GlmModel& model);

// Score vector X^T (y - mu) of the Poisson log-likelihood.
std::vector<double> poisson_score(std::span<const DesignRow> rows,
                                  std::span<const double> coefficients);

struct CandidateOutcome {
  FactorSpec spec;
  std::optional<GlmModel> model;
  std::string error;
};

struct ModelSelection {
  GlmModel best;
  std::vector<CandidateOutcome> candidates;
};

// Minimal BIC among the candidates that fit; ties go to fewer coefficients.
ModelSelection select_model(std::span<const FactorSpec> candidates,
                            std::span<const DayCount> days, const IrlsOptions& options = {});

} // namespace scusum
