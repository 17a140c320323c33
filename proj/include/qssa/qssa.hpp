// Copyright 2026 The QSSA Contributors
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

// Umbrella header: the whole toolkit.

#include "qssa/support/complex_matrix.hpp"
#include "qssa/support/error.hpp"
#include "qssa/support/numeric.hpp"

#include "qssa/qasm/ast.hpp"
#include "qssa/qasm/expand.hpp"
#include "qssa/qasm/parser.hpp"
#include "qssa/qasm/printer.hpp"
#include "qssa/qasm/stdgates.hpp"

#include "qssa/ir/build.hpp"
#include "qssa/ir/gates.hpp"
#include "qssa/ir/module.hpp"
#include "qssa/ir/ops.hpp"
#include "qssa/ir/parser.hpp"
#include "qssa/ir/printer.hpp"
#include "qssa/ir/types.hpp"

#include "qssa/verify/diagnostics.hpp"
#include "qssa/verify/verifier.hpp"

#include "qssa/raising/raiser.hpp"
#include "qssa/lowering/lowerer.hpp"

#include "qssa/opt/passes.hpp"
#include "qssa/opt/pipeline.hpp"
#include "qssa/opt/rewrite.hpp"

#include "qssa/sim/interpreter.hpp"
#include "qssa/sim/statevector.hpp"

#include "qssa/metrics/bench.hpp"
#include "qssa/metrics/metrics.hpp"
