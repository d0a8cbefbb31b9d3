// Copyright 2026 The randpec Authors
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

#include "randpec/analytics.hpp"
#include "randpec/channel_assembly.hpp"
#include "randpec/contour.hpp"
#include "randpec/denoiser.hpp"
#include "randpec/errors.hpp"
#include "randpec/experiment.hpp"
#include "randpec/expm.hpp"
#include "randpec/linalg.hpp"
#include "randpec/lindblad_builder.hpp"
#include "randpec/operator_basis.hpp"
#include "randpec/random_ensembles.hpp"
#include "randpec/spectra.hpp"
#include "randpec/superoperator.hpp"
#include "randpec/types.hpp"
