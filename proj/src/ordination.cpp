/*
 * Copyright 2026 The jointrank Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "jointrank/ordination.hpp"

#include <cmath>
#include <utility>

#include "jointrank/error.hpp"

namespace jointrank {

namespace {

void fill_spectrum(Ordination& ord) {
  ord.eigenvalues = ord.singular_values.array().square();
  const double total = ord.eigenvalues.sum();
  if (total > 0.0) {
    ord.variance_fraction = ord.eigenvalues / total;
  } else {
    ord.variance_fraction = Vector::Zero(ord.eigenvalues.size());
  }
}

void check_labels(const CodedMatrix& coded) {
  if (static_cast<Index>(coded.case_ids.size()) != coded.rows() ||
      static_cast<Index>(coded.variable_names.size()) != coded.cols()) {
    throw Error(ErrorCode::kInvalidInput,
                "label counts do not match the matrix shape");
  }
}

}  // namespace

std::string_view to_string(OrdinationMethod method) {
  return method == OrdinationMethod::kCA ? "CA" : "PCA";
}

Ordination ordinate_ca(const CodedMatrix& coded, ScalingStrategy strategy) {
  check_labels(coded);
  if (coded.rows() < 2 || coded.cols() < 2) {
    throw Error(ErrorCode::kInvalidInput,
                "correspondence analysis needs at least 2 rows and 2 columns, "
                "got " + std::to_string(coded.rows()) + "x" +
                    std::to_string(coded.cols()));
  }
  const Matrix p = correspondence_matrix(coded.matrix);
  const Margins margins = correspondence_margins(p);
  const Matrix t = ca_target(p, margins.rows, margins.cols, strategy);
  SvdResult decomposition = svd(t);

  Ordination ord;
  ord.method = OrdinationMethod::kCA;
  ord.f = principal_coordinates(decomposition, margins.rows, strategy);
  ord.v = std::move(decomposition.v);
  ord.singular_values = std::move(decomposition.singular_values);
  fill_spectrum(ord);
  ord.case_ids = coded.case_ids;
  ord.variable_names = coded.variable_names;
  return ord;
}

Ordination ordinate_pca(const CodedMatrix& coded) {
  check_labels(coded);
  const Index m = coded.rows();
  if (m < 2 || coded.cols() < 1) {
    throw Error(ErrorCode::kInvalidInput,
                "PCA needs at least 2 rows and 1 column, got " +
                    std::to_string(m) + "x" + std::to_string(coded.cols()));
  }
  require_finite(coded.matrix, "PCA input");

  Matrix z(m, coded.cols());
  for (Index j = 0; j < coded.cols(); ++j) {
    const auto col = coded.matrix.col(j);
    const double mean = col.mean();
    const Vector centered = col.array() - mean;
    const double sd = std::sqrt(centered.squaredNorm() / static_cast<double>(m));
    const double scale = col.cwiseAbs().maxCoeff();
    if (!(sd > 1e-13 * scale)) {
      throw Error(ErrorCode::kConstantColumn,
                  "column '" + coded.variable_names[j] + "' has zero variance",
                  static_cast<std::size_t>(j));
    }
    z.col(j) = centered / sd;
  }

  const double root_m = std::sqrt(static_cast<double>(m));
  SvdResult decomposition = svd(z / root_m);

  Ordination ord;
  ord.method = OrdinationMethod::kPCA;
  ord.f = principal_coordinates(decomposition, MarginVector::uniform(m));
  ord.v = std::move(decomposition.v);
  ord.singular_values = std::move(decomposition.singular_values);
  fill_spectrum(ord);
  ord.case_ids = coded.case_ids;
  ord.variable_names = coded.variable_names;
  return ord;
}

std::vector<ScreeEntry> scree(const Ordination& ord) {
  std::vector<ScreeEntry> out;
  out.reserve(static_cast<std::size_t>(ord.eigenvalues.size()));
  double cumulative = 0.0;
  for (Index j = 0; j < ord.eigenvalues.size(); ++j) {
    cumulative += ord.variance_fraction[j];
    out.push_back({static_cast<int>(j) + 1, ord.eigenvalues[j], cumulative});
  }
  return out;
}

}  // namespace jointrank
