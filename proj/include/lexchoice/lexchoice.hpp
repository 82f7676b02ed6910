#pragma once

#include "lexchoice/analysis.hpp"
#include "lexchoice/choice.hpp"
#include "lexchoice/error.hpp"
#include "lexchoice/graph.hpp"
#include "lexchoice/ir.hpp"
#include "lexchoice/lexicon.hpp"
#include "lexchoice/nuance.hpp"
#include "lexchoice/ontology.hpp"
#include "lexchoice/report.hpp"
