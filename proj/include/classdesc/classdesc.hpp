#ifndef CLASSDESC_CLASSDESC_HPP
#define CLASSDESC_CLASSDESC_HPP

// Umbrella header: the full toolchain in dependency order.

#include "classdesc/diagnostics.hpp"
#include "classdesc/ast.hpp"
#include "classdesc/lexer.hpp"
#include "classdesc/parser.hpp"
#include "classdesc/registry.hpp"
#include "classdesc/plan.hpp"
#include "classdesc/emit.hpp"
#include "classdesc/rewrite.hpp"
#include "classdesc/value.hpp"
#include "classdesc/pack.hpp"
#include "classdesc/bind.hpp"
#include "classdesc/ir.hpp"
#include "classdesc/values_file.hpp"
#include "classdesc/cli.hpp"

#endif  // CLASSDESC_CLASSDESC_HPP
