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

#ifndef DCRB_DECAY_CURVE_H
#define DCRB_DECAY_CURVE_H

#include <string>
#include <vector>

#include "dcrb/error.h"

namespace dcrb {

/// Ground-state probability of one qubit against the number of blocks n = l/k.
struct DecayCurve {
    std::vector<double> block_counts;
    std::vector<double> means;
    std::vector<double> stderrs;
    int qubit = 0;
    std::string block;
    std::string dd;
    int seeds = 0;
    int shots = 0;

    size_t size() const {
        return block_counts.size();
    }
    long total_shots() const {
        return static_cast<long>(seeds) * shots;
    }

    void validate() const {
        if (means.size() != block_counts.size() || stderrs.size() != block_counts.size()) {
            throw DimensionError("decay curve columns have different lengths");
        }
        for (size_t i = 0; i < means.size(); ++i) {
            if (!(means[i] >= 0 && means[i] <= 1)) {
                throw ParameterError("decay curve mean outside [0, 1]");
            }
            if (!(stderrs[i] >= 0)) {
                throw ParameterError("decay curve stderr must be non-negative");
            }
        }
    }
};

}  // namespace dcrb

#endif
