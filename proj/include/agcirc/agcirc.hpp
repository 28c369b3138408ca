// agcirc/agcirc.hpp - umbrella header
#pragma once

#include "agcirc/alternation.hpp"
#include "agcirc/derivation.hpp"
#include "agcirc/fixpoint.hpp"
#include "agcirc/generators.hpp"
#include "agcirc/grammar.hpp"
#include "agcirc/grammar_io.hpp"
#include "agcirc/io_graph.hpp"
#include "agcirc/report.hpp"
#include "agcirc/tree_oracle.hpp"
#include "agcirc/verdict.hpp"
