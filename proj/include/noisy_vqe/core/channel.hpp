// Copyright 2026 The noisy-vqe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "noisy_vqe/core/linalg.hpp"
#include "noisy_vqe/core/state.hpp"

namespace noisy_vqe {

/// Trace-preserving operator-sum channel on one or two qubits.
class KrausChannel {
  public:
    static constexpr double kCompletenessTolerance = 1e-10;

    KrausChannel(int arity, std::vector<Matrix> operators, std::string name = "kraus")
        : arity_(arity), operators_(std::move(operators)), name_(std::move(name)) {
        if (arity_ != 1 && arity_ != 2) {
            throw std::invalid_argument("KrausChannel: arity must be 1 or 2");
        }
        if (operators_.empty()) {
            throw std::invalid_argument("KrausChannel: empty operator set");
        }
        const std::size_t dim = std::size_t{1} << arity_;
        for (const auto &e : operators_) {
            if (e.rows() != dim || e.cols() != dim) {
                throw std::invalid_argument("KrausChannel: operator dimension must be 2^arity");
            }
        }
        if (completeness_error() > kCompletenessTolerance) {
            throw std::invalid_argument("KrausChannel '" + name_ + "' is not trace preserving");
        }
        const std::size_t sdim = dim * dim;
        superoperator_ = Matrix(sdim, sdim);
        for (const auto &e : operators_) {
            for (std::size_t ro = 0; ro < dim; ++ro) {
                for (std::size_t co = 0; co < dim; ++co) {
                    for (std::size_t ri = 0; ri < dim; ++ri) {
                        for (std::size_t ci = 0; ci < dim; ++ci) {
                            superoperator_(ro + dim * co, ri + dim * ci) += e(ro, ri) * std::conj(e(co, ci));
                        }
                    }
                }
            }
        }
    }

    [[nodiscard]] int arity() const { return arity_; }
    [[nodiscard]] const std::vector<Matrix> &operators() const { return operators_; }
    [[nodiscard]] const std::string &name() const { return name_; }
    /// sum_k E_k (x) conj(E_k), indexed (row + 2^arity * col).
    [[nodiscard]] const Matrix &superoperator() const { return superoperator_; }

    /// max |(sum_k E_k^dagger E_k - I)_ij|
    [[nodiscard]] double completeness_error() const {
        const std::size_t dim = std::size_t{1} << arity_;
        Matrix sum(dim, dim);
        for (const auto &e : operators_) {
            sum += e.adjoint() * e;
        }
        return max_abs_diff(sum, Matrix::identity(dim));
    }

  private:
    int arity_;
    std::vector<Matrix> operators_;
    std::string name_;
    Matrix superoperator_;
};

inline void apply_channel(DensityMatrix &rho, const KrausChannel &channel, std::span<const int> qubits) {
    if (qubits.size() != static_cast<std::size_t>(channel.arity())) {
        throw std::invalid_argument("apply_channel: channel arity " + std::to_string(channel.arity()) +
                                    " does not match " + std::to_string(qubits.size()) + " addressed qubit(s)");
    }
    rho.apply_superoperator(qubits, channel.superoperator());
}

inline DensityMatrix applied(DensityMatrix rho, const KrausChannel &channel, std::vector<int> qubits) {
    apply_channel(rho, channel, qubits);
    return rho;
}

} // namespace noisy_vqe
