#pragma once

#include "lhott/models.hpp"
#include "lhott/serialize.hpp"
#include "lhott/dsl/parser.hpp"
#include "lhott/dsl/printer.hpp"
#include "lhott/dsl/check.hpp"
#include "lhott/dsl/run.hpp"
