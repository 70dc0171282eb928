#pragma once

#include "tip/autodiff.hpp"
#include "tip/errors.hpp"
#include "tip/expressivity.hpp"
#include "tip/export.hpp"
#include "tip/filtration.hpp"
#include "tip/generate.hpp"
#include "tip/graph.hpp"
#include "tip/graph_json.hpp"
#include "tip/matrix.hpp"
#include "tip/nn.hpp"
#include "tip/persistence.hpp"
#include "tip/pooling.hpp"
#include "tip/rng.hpp"
#include "tip/scalar.hpp"
#include "tip/spectral.hpp"
#include "tip/train.hpp"
#include "tip/vectorize.hpp"
#include "tip/wasserstein.hpp"
#include "tip/wl.hpp"
