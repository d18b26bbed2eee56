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

#ifndef DCRB_DCRB_H
#define DCRB_DCRB_H

#include "dcrb/analysis.h"
#include "dcrb/circuit.h"
#include "dcrb/circuit_io.h"
#include "dcrb/clifford.h"
#include "dcrb/decay_curve.h"
#include "dcrb/engine.h"
#include "dcrb/error.h"
#include "dcrb/noise.h"
#include "dcrb/noise_config.h"
#include "dcrb/oracle.h"
#include "dcrb/qmath.h"
#include "dcrb/rbproto.h"
#include "dcrb/rng.h"

#endif
