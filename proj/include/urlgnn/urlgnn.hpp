// Copyright 2026 The urlgnn Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "urlgnn/autodiff.hpp"
#include "urlgnn/checkpoint.hpp"
#include "urlgnn/config.hpp"
#include "urlgnn/data.hpp"
#include "urlgnn/encoder.hpp"
#include "urlgnn/error.hpp"
#include "urlgnn/inference.hpp"
#include "urlgnn/layers.hpp"
#include "urlgnn/metrics.hpp"
#include "urlgnn/model.hpp"
#include "urlgnn/optim.hpp"
#include "urlgnn/parallel.hpp"
#include "urlgnn/rng.hpp"
#include "urlgnn/synthetic.hpp"
#include "urlgnn/tensor.hpp"
#include "urlgnn/trainer.hpp"
