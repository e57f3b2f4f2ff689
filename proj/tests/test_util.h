// Copyright 2026 The LISTA Design Space Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LISTA_TESTS_TEST_UTIL_H_
#define LISTA_TESTS_TEST_UTIL_H_

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <filesystem>
#include <string>

#include "lista/common.h"
#include "lista/rng.h"

namespace lista::testing {

inline Matrix random_matrix(int rows, int cols, std::uint64_t seed, double scale = 1.0) {
  CounterRng rng(seed, 99);
  Matrix m(rows, cols);
  for (int j = 0; j < cols; ++j) {
    for (int i = 0; i < rows; ++i) m(i, j) = scale * rng.normal();
  }
  return m;
}

// Largest eigenvalue of D^T D from a dense symmetric eigensolver.
inline double eig_lipschitz(const Matrix& d) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(d.transpose() * d);
  return es.eigenvalues().maxCoeff();
}

// Fresh scratch directory named after the running test.
inline std::filesystem::path scratch_dir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::temp_directory_path() / "lista_tests" /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

#define EXPECT_LISTA_ERROR(stmt, expected_kind)                  \
  do {                                                           \
    try {                                                        \
      stmt;                                                      \
      ADD_FAILURE() << "no lista::Error thrown by " #stmt;       \
    } catch (const ::lista::Error& e) {                          \
      EXPECT_EQ(e.kind(), expected_kind) << e.what();            \
    }                                                            \
  } while (0)

}  // namespace lista::testing

#endif  // LISTA_TESTS_TEST_UTIL_H_
