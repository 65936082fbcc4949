#pragma once

#include <string>

namespace qlc {

enum class LossKind {
  qloss,
  zero_one,
  square,
  logistic,
  smoothed_hinge,
  sigmoid,
  probit,
};

LossKind loss_kind_from_name(const std::string& name);
const char* loss_kind_name(LossKind kind);

// Losses are functions of the margin m = y * (w.x + b).

// Clipped quadratic loss with clipping level controlled by q <= 0:
//   min((1 - q)^2, max(0, 1 - m)^2)
// Flat at (1-q)^2 for m <= q, zero for m >= 1.
double q_loss(double m, double q);

// Joint objective whose minimum over t recovers q_loss:
//   (m - t)^2 + (1 - q)^2 * [t < 1]
// The indicator is 0 at t == 1 exactly.
double variational_bound(double m, double t, double q);

// Argmin of variational_bound over t for fixed m.
double t_star(double m, double q);

// 1 if m < 0 else 0; a zero margin counts as correct.
int zero_one(double m);

struct LossValue {
  double value;
  double derivative;
};

// Differentiable surrogates used by the gradient trainer.  Rejects qloss
// and zero_one.
LossValue baseline_loss(LossKind kind, double m);

bool loss_is_differentiable(LossKind kind);

}  // namespace qlc
