// Copyright 2026 The trajgan Authors
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

#pragma once

#include <Eigen/Core>
#include <vector>

namespace trajgan {

// Minimum-cost perfect matching on a square cost matrix, shortest augmenting
// path formulation, O(n^3). Returns the total cost; row_to_col (when not
// null) receives the optimal assignment.
double solve_assignment(const Eigen::MatrixXd& cost, std::vector<int>* row_to_col = nullptr);

// Optimal transport between uniform marginals 1/n (rows) and 1/m (columns)
// for an n x m cost matrix. Masses are scaled to integers (row supply m,
// column demand n) and solved exactly by successive shortest paths, so the
// result is the exact optimum of the linear program.
double solve_uniform_transport(const Eigen::MatrixXd& cost);

}  // namespace trajgan
