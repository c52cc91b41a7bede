#pragma once

#include <gtest/gtest.h>

#include <vector>

#include "jtheta/error.hpp"
#include "jtheta/quadform.hpp"
#include "jtheta/series.hpp"
#include "oracles.hpp"

namespace fx {

using jtheta::Complex;
using jtheta::ComplexVector;
using jtheta::IntVector;

inline const Complex I{0.0, 1.0};

inline jtheta::QuadraticForm form_2i4() {
  return jtheta::QuadraticForm::validate(jtheta::IntMatrix::identity(4, 2));
}
inline jtheta::QuadraticForm form_a2() {
  return jtheta::QuadraticForm::validate(jtheta::IntMatrix{{2, 1}, {1, 2}});
}
inline std::vector<IntVector> dirs_e3e4() { return {{0, 0, 1, 0}, {0, 0, 0, 1}}; }
inline ComplexVector v_iso() { return {1.0, I, 0.0, 0.0}; }
inline ComplexVector v_ortho() { return {1.0, 1.0, 0.0, 0.0}; }
inline ComplexVector v_gen() { return {0.0, 0.0, 1.0, 0.0}; }

inline jtheta::ThetaSpec spec(const ComplexVector& v, unsigned k) {
  return jtheta::ThetaSpec::make(form_2i4(), dirs_e3e4(), v, k);
}

inline oracle::IntMat to_oracle(const jtheta::IntMatrix& m) {
  oracle::IntMat out(m.dim(), oracle::IntVec(m.dim()));
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) out[i][j] = m(i, j);
  return out;
}

inline jtheta::IntMatrix from_oracle(const oracle::IntMat& m) {
  jtheta::IntMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m.size(); ++j) out(i, j) = m[i][j];
  return out;
}

}  // namespace fx

// Asserts that stmt throws jtheta::Error with the given code.
#define EXPECT_JT_ERROR(stmt, err_code)                                  \
  do {                                                                   \
    try {                                                                \
      stmt;                                                              \
      ADD_FAILURE() << "expected " #err_code;                            \
    } catch (const jtheta::Error& e) {                                   \
      EXPECT_EQ(e.code(), jtheta::ErrorCode::err_code) << e.what();      \
    }                                                                    \
  } while (0)
