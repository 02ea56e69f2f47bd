// Copyright 2026 The fermiflow Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "fermiflow/config.hpp"
#include "fermiflow/dense_tree.hpp"
#include "fermiflow/egorov.hpp"
#include "fermiflow/errors.hpp"
#include "fermiflow/exact.hpp"
#include "fermiflow/experiments.hpp"
#include "fermiflow/fermionic.hpp"
#include "fermiflow/fock.hpp"
#include "fermiflow/graded.hpp"
#include "fermiflow/hartree_fock.hpp"
#include "fermiflow/linalg.hpp"
#include "fermiflow/mode_system.hpp"
#include "fermiflow/quadrature.hpp"
#include "fermiflow/report.hpp"
#include "fermiflow/sector.hpp"
#include "fermiflow/tree.hpp"
#include "fermiflow/version.hpp"
