// Copyright 2026 The rflx Authors
// SPDX-License-Identifier: Apache-2.0

// Umbrella header for the rflx message-format toolchain.

#pragma once

#include "rflx/codegen.hpp"
#include "rflx/derive.hpp"
#include "rflx/dot.hpp"
#include "rflx/dsl/ast.hpp"
#include "rflx/dsl/elaborate.hpp"
#include "rflx/dsl/lexer.hpp"
#include "rflx/dsl/parser.hpp"
#include "rflx/dsl/printer.hpp"
#include "rflx/expr.hpp"
#include "rflx/field.hpp"
#include "rflx/model.hpp"
#include "rflx/runtime.hpp"
