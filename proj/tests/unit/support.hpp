#pragma once

#include "dshock/common.hpp"

#include <random>

// Checks that `expr` throws dshock::Error carrying `code`.
#define CHECK_ERRC(expr, errc)                                  \
  do {                                                          \
    bool thrown_ = false;                                       \
    try {                                                       \
      (void)(expr);                                             \
    } catch (const dshock::Error& e_) {                         \
      thrown_ = true;                                           \
      CHECK_MESSAGE(e_.code() == (errc), e_.what());            \
    }                                                           \
    CHECK_MESSAGE(thrown_, "expected an error from " #expr);    \
  } while (0)

inline dshock::Vec vec(std::initializer_list<double> v) {
  dshock::Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

inline dshock::Vec random_unit(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g;
  dshock::Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = g(rng);
  return v / v.norm();
}
