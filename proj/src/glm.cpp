#include "scusum/glm.hpp"

#include "scusum/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace scusum {

namespace {

constexpr const char* kMonthNames[] = {"Jan", "Feb", "Mar", "Apr", "May", "Jun",
                                       "Jul", "Aug", "Sep", "Oct", "Nov", "Dec"};

// Tue..Sat; Monday is the reference level and Sunday never appears in fits.
constexpr int kDowDummies = 5;

double deviance_of(const Eigen::VectorXd& y, const Eigen::VectorXd& mu) {
  long double dev = 0.0L;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    const double yi = y[i];
    const double term = yi > 0.0 ? yi * std::log(yi / mu[i]) : 0.0;
    dev += static_cast<long double>(term) - (yi - mu[i]);
  }
  return static_cast<double>(2.0L * dev);
}

double log_likelihood_of(const Eigen::VectorXd& y, const Eigen::VectorXd& eta,
                         const Eigen::VectorXd& mu) {
  long double ll = 0.0L;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    ll += static_cast<long double>(y[i] * eta[i]) - mu[i] - std::lgamma(y[i] + 1.0);
  }
  return static_cast<double>(ll);
}

Eigen::VectorXd score_of(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                         const Eigen::VectorXd& gamma) {
  // Linear predictor and mean in extended precision; the score is a small
  // difference of large sums near the optimum.
  std::vector<long double> resid(static_cast<std::size_t>(x.rows()));
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    long double eta = 0.0L;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      eta += static_cast<long double>(x(i, j)) * gamma[j];
    }
    resid[static_cast<std::size_t>(i)] = static_cast<long double>(y[i]) - std::exp(eta);
  }
  Eigen::VectorXd score(x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    long double acc = 0.0L;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      acc += static_cast<long double>(x(i, j)) * resid[static_cast<std::size_t>(i)];
    }
    score[j] = static_cast<double>(acc);
  }
  return score;
}

} // namespace

std::size_t FactorSpec::columns() const {
  return 1 + (weekday_flag ? 1 : 0) + (trend ? 1 : 0) + (month ? 11 : 0) +
         (day_of_week ? kDowDummies : 0) + (day_after_holiday ? 1 : 0);
}

std::vector<std::string> FactorSpec::column_names() const {
  std::vector<std::string> names{"intercept"};
  if (weekday_flag) {
    names.emplace_back("weekday");
  }
  if (trend) {
    names.emplace_back("days_since_origin");
  }
  if (month) {
    for (int m = 1; m < 12; ++m) {
      names.push_back(std::string("month_") + kMonthNames[m]);
    }
  }
  if (day_of_week) {
    for (int d = 1; d <= kDowDummies; ++d) {
      names.push_back(std::string("dow_") + to_string(static_cast<Weekday>(d)));
    }
  }
  if (day_after_holiday) {
    names.emplace_back("day_after_holiday");
  }
  return names;
}

std::string FactorSpec::label() const {
  std::string out;
  auto add = [&](bool on, const char* name) {
    if (on) {
      out += out.empty() ? "" : "+";
      out += name;
    }
  };
  add(weekday_flag, "weekday");
  add(trend, "trend");
  add(month, "month");
  add(day_of_week, "day_of_week");
  add(day_after_holiday, "day_after_holiday");
  return out.empty() ? "intercept" : out;
}

std::vector<FactorSpec> default_candidates() {
  return {
      FactorSpec{.weekday_flag = true},
      FactorSpec{.weekday_flag = true, .trend = true},
      FactorSpec{.weekday_flag = true, .trend = true, .month = true},
      FactorSpec{.trend = true, .month = true, .day_of_week = true},
      FactorSpec{.trend = true, .month = true, .day_of_week = true, .day_after_holiday = true},
  };
}

std::vector<double> encode_features(const DayMeta& meta, const FactorSpec& spec) {
  std::vector<double> x;
  x.reserve(spec.columns());
  x.push_back(1.0);
  if (spec.weekday_flag) {
    x.push_back(meta.is_weekday ? 1.0 : 0.0);
  }
  if (spec.trend) {
    x.push_back(static_cast<double>(meta.days_since_origin));
  }
  if (spec.month) {
    for (int m = 2; m <= 12; ++m) {
      x.push_back(meta.month == m ? 1.0 : 0.0);
    }
  }
  if (spec.day_of_week) {
    const int d = static_cast<int>(meta.day_of_week);
    for (int k = 1; k <= kDowDummies; ++k) {
      x.push_back(d == k ? 1.0 : 0.0);
    }
  }
  if (spec.day_after_holiday) {
    x.push_back(meta.is_day_after_holiday ? 1.0 : 0.0);
  }
  return x;
}

std::vector<DesignRow> design_rows(std::span<const DayCount> days, const FactorSpec& spec) {
  std::vector<DesignRow> rows;
  rows.reserve(days.size());
  for (const auto& d : days) {
    rows.push_back({encode_features(d.meta, spec), d.count});
  }
  return rows;
}

double GlmModel::linear_predictor(std::span<const double> features) const {
  if (features.size() != coefficients.size()) {
    throw Error(ErrorKind::Validation, "feature vector length does not match the model");
  }
  return std::inner_product(features.begin(), features.end(), coefficients.begin(), 0.0);
}

double GlmModel::predict(const DayMeta& meta) const {
  const auto x = encode_features(meta, spec);
  return std::exp(linear_predictor(x));
}

GlmModel fit_poisson_glm(std::span<const DesignRow> rows, const FactorSpec& spec,
                         const IrlsOptions& options) {
  const auto p = static_cast<Eigen::Index>(spec.columns());
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto names = spec.column_names();
  if (n < p) {
    throw Error(ErrorKind::Validation, "need at least " + std::to_string(p) +
                                           " observations for " + std::to_string(p) +
                                           " coefficients, got " + std::to_string(n));
  }

  Eigen::MatrixXd x(n, p);
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.features.size()) != p) {
      throw Error(ErrorKind::Validation, "design row " + std::to_string(i) + " has " +
                                             std::to_string(row.features.size()) +
                                             " features, expected " + std::to_string(p));
    }
    if (row.count < 0) {
      throw Error(ErrorKind::Validation, "negative count in design row " + std::to_string(i));
    }
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = row.features[static_cast<std::size_t>(j)];
    }
    y[i] = static_cast<double>(row.count);
  }

  // Work in column-scaled coordinates so the raw trend column does not
  // dominate the rank decision or the Newton system.
  Eigen::VectorXd scale(p);
  std::vector<std::string> zero_columns;
  for (Eigen::Index j = 0; j < p; ++j) {
    scale[j] = x.col(j).cwiseAbs().maxCoeff();
    if (scale[j] == 0.0) {
      zero_columns.push_back(names[static_cast<std::size_t>(j)]);
      scale[j] = 1.0;
    }
  }
  if (!zero_columns.empty()) {
    throw SingularDesignError(std::move(zero_columns));
  }
  const Eigen::MatrixXd xs = x * scale.cwiseInverse().asDiagonal();

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  qr.setThreshold(1e-10);
  if (qr.rank() < p) {
    std::vector<std::string> dependent;
    for (Eigen::Index k = qr.rank(); k < p; ++k) {
      dependent.push_back(names[static_cast<std::size_t>(qr.colsPermutation().indices()[k])]);
    }
    std::sort(dependent.begin(), dependent.end());
    throw SingularDesignError(std::move(dependent));
  }

  Eigen::VectorXd gamma = Eigen::VectorXd::Zero(p);
  gamma[0] = std::log(y.mean() + 0.1) * scale[0];

  Eigen::VectorXd eta = xs * gamma;
  Eigen::VectorXd mu = eta.array().exp().matrix();
  double dev = deviance_of(y, mu);
  double prev_dev = std::numeric_limits<double>::quiet_NaN();
  int iteration = 0;
  bool converged = false;
  Eigen::VectorXd score_orig(p);
  double best_score = std::numeric_limits<double>::infinity();
  int stalled = 0;

  for (;; ++iteration) {
    const Eigen::VectorXd score_s = score_of(xs, y, gamma);
    score_orig = score_s.cwiseProduct(scale);
    const double score_norm = score_orig.cwiseAbs().maxCoeff();
    if (score_norm < options.score_tolerance) {
      converged = true;
      break;
    }
    // The deviance rule only ends the loop once the score has stopped
    // improving, i.e. it sits at its rounding floor.
    stalled = score_norm < 0.5 * best_score ? 0 : stalled + 1;
    best_score = std::min(best_score, score_norm);
    if (stalled >= 3 && iteration > 0 &&
        std::abs(dev - prev_dev) / (std::abs(dev) + 0.1) < options.deviance_tolerance) {
      converged = true;
      break;
    }
    if (iteration >= options.max_iterations) {
      break;
    }

    const Eigen::MatrixXd info = xs.transpose() * mu.asDiagonal() * xs;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success) {
      throw SingularDesignError(names);
    }
    Eigen::VectorXd step = ldlt.solve(score_s);

    // Step halving keeps the deviance from increasing.
    Eigen::VectorXd next_gamma;
    Eigen::VectorXd next_eta;
    Eigen::VectorXd next_mu;
    double next_dev = std::numeric_limits<double>::infinity();
    for (int halving = 0; halving < 40; ++halving) {
      next_gamma = gamma + step;
      next_eta = xs * next_gamma;
      next_mu = next_eta.array().exp().matrix();
      next_dev = deviance_of(y, next_mu);
      if (std::isfinite(next_dev) && next_dev <= dev + 1e-12 * (std::abs(dev) + 1.0)) {
        break;
      }
      step *= 0.5;
    }
    prev_dev = dev;
    gamma = next_gamma;
    eta = next_eta;
    mu = next_mu;
    dev = next_dev;
  }
  if (!converged) {
    throw ConvergenceError(iteration, dev);
  }

  // Refine the coefficients as they will be stored, in the original columns:
  // dividing by the scale perturbs the score enough to matter.
  Eigen::VectorXd beta = gamma.cwiseQuotient(scale);
  Eigen::VectorXd score_b = score_of(x, y, beta);
  double score_norm = score_b.cwiseAbs().maxCoeff();
  {
    const Eigen::MatrixXd info = xs.transpose() * mu.asDiagonal() * xs;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    for (int k = 0; k < 30 && score_norm >= options.score_tolerance; ++k) {
      const Eigen::VectorXd step = ldlt.solve(score_b.cwiseQuotient(scale)).cwiseQuotient(scale);
      const Eigen::VectorXd next = beta + step;
      const Eigen::VectorXd next_score = score_of(x, y, next);
      const double next_norm = next_score.cwiseAbs().maxCoeff();
      if (!(next_norm < score_norm)) {
        break;
      }
      beta = next;
      score_b = next_score;
      score_norm = next_norm;
    }
  }
  // Newton corrections smaller than an ulp round away. Finish with single
  // coordinate moves on the representable grid: a column whose score reacts
  // weakly to its own coefficient can still cancel another column's score.
  if (score_norm >= options.score_tolerance) {
    const Eigen::MatrixXd info = x.transpose() * mu.asDiagonal() * x;
    for (int k = 0; k < 400 && score_norm >= options.score_tolerance; ++k) {
      Eigen::Index worst = 0;
      score_b.cwiseAbs().maxCoeff(&worst);
      Eigen::VectorXd best_beta;
      double best_predicted = score_norm;
      for (Eigen::Index c = 0; c < p; ++c) {
        if (info(worst, c) == 0.0) {
          continue;
        }
        const double wanted = beta[c] + score_b[worst] / info(worst, c);
        double moved = wanted;
        if (moved == beta[c]) {
          moved = std::nextafter(beta[c], score_b[worst] / info(worst, c) > 0.0 ? INFINITY : -INFINITY);
        }
        const double predicted =
            (score_b - info.col(c) * (moved - beta[c])).cwiseAbs().maxCoeff();
        if (predicted < best_predicted) {
          best_predicted = predicted;
          best_beta = beta;
          best_beta[c] = moved;
        }
      }
      if (best_beta.size() == 0) {
        break;
      }
      const Eigen::VectorXd next_score = score_of(x, y, best_beta);
      const double next_norm = next_score.cwiseAbs().maxCoeff();
      if (!(next_norm < score_norm)) {
        break;
      }
      beta = best_beta;
      score_b = next_score;
      score_norm = next_norm;
    }
  }
  eta = x * beta;
  mu = eta.array().exp().matrix();

  GlmModel model;
  model.spec = spec;
  model.coefficients.assign(beta.data(), beta.data() + p);
  model.log_likelihood = log_likelihood_of(y, eta, mu);
  model.deviance = deviance_of(y, mu);
  model.n_obs = static_cast<std::size_t>(n);
  model.iterations = iteration;
  model.score_max_norm = score_norm;
  model.bic = bic(model);
  return model;
}

GlmModel fit_daily_glm(std::span<const DayCount> days, const FactorSpec& spec,
                       const IrlsOptions& options) {
  const auto rows = design_rows(days, spec);
  return fit_poisson_glm(rows, spec, options);
}

double information_criterion(double k, double n, double log_likelihood) {
  return k * std::log(n) - 2.0 * log_likelihood;
}

double bic(const GlmModel& model) {
  return information_criterion(static_cast<double>(model.coefficients.size()),
                               static_cast<double>(model.n_obs), model.log_likelihood);
}

std::vector<double> poisson_score(std::span<const DesignRow> rows,
                                  std::span<const double> coefficients) {
  std::vector<long double> acc(coefficients.size(), 0.0L);
  for (const auto& row : rows) {
    long double eta = 0.0L;
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      eta += static_cast<long double>(row.features[j]) * coefficients[j];
    }
    const long double resid = static_cast<long double>(row.count) - std::exp(eta);
    for (std::size_t j = 0; j < coefficients.size(); ++j) {
      acc[j] += row.features[j] * resid;
    }
  }
  return {acc.begin(), acc.end()};
}

ModelSelection select_model(std::span<const FactorSpec> candidates,
                            std::span<const DayCount> days, const IrlsOptions& options) {
  ModelSelection selection;
  std::optional<std::size_t> best;
  for (const auto& spec : candidates) {
    CandidateOutcome outcome{spec, std::nullopt, {}};
    try {
      outcome.model = fit_daily_glm(days, spec, options);
    } catch (const Error& e) {
      outcome.error = e.what();
    }
    selection.candidates.push_back(std::move(outcome));
    const auto& added = selection.candidates.back();
    if (!added.model) {
      continue;
    }
    if (!best) {
      best = selection.candidates.size() - 1;
      continue;
    }
    const auto& incumbent = *selection.candidates[*best].model;
    const auto& challenger = *added.model;
    if (challenger.bic < incumbent.bic ||
        (challenger.bic == incumbent.bic &&
         challenger.coefficients.size() < incumbent.coefficients.size())) {
      best = selection.candidates.size() - 1;
    }
  }
  if (!best) {
    std::string message = "no candidate model could be fitted:";
    for (const auto& c : selection.candidates) {
      message += " [" + c.spec.label() + ": " + c.error + "]";
    }
    throw Error(ErrorKind::ModelSelection, message);
  }
  selection.best = *selection.candidates[*best].model;
  return selection;
}

} // namespace scusum
