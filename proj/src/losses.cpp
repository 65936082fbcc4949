#include "losses.hpp"

#include <cmath>

#include "errors.hpp"

namespace qlc {

namespace {

void check_margin(double m) {
  require(std::isfinite(m), ErrorCode::domain, "margin must be finite");
}

void check_q(double q) {
  require(std::isfinite(q) && q <= 0.0, ErrorCode::domain,
          "q must be finite and <= 0, got " + std::to_string(q));
}

}  // namespace

LossKind loss_kind_from_name(const std::string& name) {
  if (name == "qloss") return LossKind::qloss;
  if (name == "zero_one") return LossKind::zero_one;
  if (name == "square") return LossKind::square;
  if (name == "logistic") return LossKind::logistic;
  if (name == "smoothed_hinge") return LossKind::smoothed_hinge;
  if (name == "sigmoid") return LossKind::sigmoid;
  if (name == "probit") return LossKind::probit;
  fail(ErrorCode::invalid_argument, "unknown loss '" + name + "'");
}

const char* loss_kind_name(LossKind kind) {
  switch (kind) {
    case LossKind::qloss: return "qloss";
    case LossKind::zero_one: return "zero_one";
    case LossKind::square: return "square";
    case LossKind::logistic: return "logistic";
    case LossKind::smoothed_hinge: return "smoothed_hinge";
    case LossKind::sigmoid: return "sigmoid";
    case LossKind::probit: return "probit";
  }
  fail(ErrorCode::internal, "bad LossKind");
}

double q_loss(double m, double q) {
  check_margin(m);
  check_q(q);
  const double cap = (1.0 - q) * (1.0 - q);
  const double hinge = m < 1.0 ? (1.0 - m) * (1.0 - m) : 0.0;
  return hinge < cap ? hinge : cap;
}

double variational_bound(double m, double t, double q) {
  check_margin(m);
  check_q(q);
  require(std::isfinite(t), ErrorCode::domain, "t must be finite");
  const double r = m - t;
  const double penalty = t < 1.0 ? (1.0 - q) * (1.0 - q) : 0.0;
  return r * r + penalty;
}

double t_star(double m, double q) {
  check_margin(m);
  check_q(q);
  if (m >= 1.0) return m;  // already confident, no penalty at t = m
  if (m > q) return 1.0;   // pay the fit term, avoid the penalty
  return m;                // flagged: pay the penalty, fit exactly
}

int zero_one(double m) {
  check_margin(m);
  return m < 0.0 ? 1 : 0;
}

bool loss_is_differentiable(LossKind kind) {
  switch (kind) {
    case LossKind::square:
    case LossKind::logistic:
    case LossKind::smoothed_hinge:
    case LossKind::sigmoid:
    case LossKind::probit:
      return true;
    default:
      return false;
  }
}

LossValue baseline_loss(LossKind kind, double m) {
  check_margin(m);
  switch (kind) {
    case LossKind::square: {
      const double r = m - 1.0;
      return {r * r, 2.0 * r};
    }
    case LossKind::logistic: {
      // log(1 + e^-m) without overflow on either tail
      const double value = m >= 0.0 ? std::log1p(std::exp(-m)) : -m + std::log1p(std::exp(m));
      const double deriv = -1.0 / (1.0 + std::exp(m));
      return {value, deriv};
    }
    case LossKind::smoothed_hinge: {
      if (m >= 1.0) return {0.0, 0.0};
      if (m >= 0.0) {
        const double r = 1.0 - m;
        return {0.5 * r * r, m - 1.0};
      }
      return {0.5 - m, -1.0};
    }
    case LossKind::sigmoid: {
      double s;
      if (m >= 0.0) {
        const double e = std::exp(-m);
        s = e / (1.0 + e);
      } else {
        s = 1.0 / (1.0 + std::exp(m));
      }
      return {s, -s * (1.0 - s)};
    }
    case LossKind::probit: {
      const double inv_sqrt2 = 0.70710678118654752440;
      const double value = 0.5 * std::erfc(m * inv_sqrt2);
      const double phi = std::exp(-0.5 * m * m) * 0.39894228040143267794;
      return {value, -phi};
    }
    default:
      fail(ErrorCode::invalid_argument,
           std::string("loss '") + loss_kind_name(kind) + "' has no gradient form");
  }
}

}  // namespace qlc
