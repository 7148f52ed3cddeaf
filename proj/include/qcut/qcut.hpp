#pragma once

#include "qcut/errors.hpp"
#include "qcut/graph.hpp"
#include "qcut/maxcut_oracles.hpp"
#include "qcut/merge.hpp"
#include "qcut/metrics.hpp"
#include "qcut/nelder_mead.hpp"
#include "qcut/partition.hpp"
#include "qcut/pipeline.hpp"
#include "qcut/qaoa.hpp"
#include "qcut/report.hpp"
#include "qcut/statevector.hpp"
