// Copyright 2026 The dcrb Authors
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

#ifndef DCRB_CLIFFORD_H
#define DCRB_CLIFFORD_H

#include <array>
#include <deque>
#include <string>
#include <vector>

#include "dcrb/qmath.h"

namespace dcrb {

/// The 24 single-qubit Cliffords modulo global phase, generated by closure
/// over {H, S}. Index 0 is the identity.
class CliffordTable {
   public:
    static constexpr int kSize = 24;

    static const CliffordTable &instance() {
        static const CliffordTable table;
        return table;
    }

    int size() const {
        return kSize;
    }
    const Matrix &unitary(int index) const {
        return unitaries_.at(index);
    }
    /// Index of the Clifford equal to applying `first`, then `second`.
    int compose(int first, int second) const {
        return compose_[first][second];
    }
    int inverse(int index) const {
        return inverse_[index];
    }
    /// Index of U up to global phase, or -1 if U is not a Clifford.
    int find(const Matrix &u) const {
        Matrix c = canonical(u);
        for (int i = 0; i < kSize; ++i) {
            if ((unitaries_[i] - c).cwiseAbs().maxCoeff() < 1e-9) {
                return i;
            }
        }
        return -1;
    }
    /// Inverse of the product of `sequence` (applied left to right).
    int inverse_of_sequence(const std::vector<int> &sequence) const {
        int acc = 0;
        for (int c : sequence) {
            acc = compose(acc, c);
        }
        return inverse(acc);
    }
    static std::string gate_name(int index) {
        return "c" + std::to_string(index);
    }

    /// Scales U so its first non-negligible entry (column-major) is real positive.
    static Matrix canonical(const Matrix &u) {
        for (Eigen::Index i = 0; i < u.size(); ++i) {
            cplx v = u.data()[i];
            if (std::abs(v) > 1e-6) {
                return u * (std::conj(v) / std::abs(v));
            }
        }
        return u;
    }

   private:
    CliffordTable() {
        std::deque<Matrix> queue{gates::identity()};
        unitaries_.push_back(gates::identity());
        while (!queue.empty()) {
            Matrix u = queue.front();
            queue.pop_front();
            for (const Matrix &g : {gates::h(), gates::s()}) {
                Matrix next = canonical(g * u);
                bool seen = false;
                for (const auto &v : unitaries_) {
                    if ((v - next).cwiseAbs().maxCoeff() < 1e-9) {
                        seen = true;
                        break;
                    }
                }
                if (!seen) {
                    unitaries_.push_back(next);
                    queue.push_back(next);
                }
            }
        }
        if (unitaries_.size() != kSize) {
            throw std::logic_error("Clifford closure produced " + std::to_string(unitaries_.size()) + " elements");
        }
        for (int a = 0; a < kSize; ++a) {
            for (int b = 0; b < kSize; ++b) {
                compose_[a][b] = find(unitaries_[b] * unitaries_[a]);
                if (compose_[a][b] == 0) {
                    inverse_[a] = b;
                }
            }
        }
    }

    std::vector<Matrix> unitaries_;
    std::array<std::array<int, kSize>, kSize> compose_{};
    std::array<int, kSize> inverse_{};
};

}  // namespace dcrb

#endif
