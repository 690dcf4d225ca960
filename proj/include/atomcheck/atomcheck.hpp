#pragma once

#include "atomcheck/vector_clock.hpp"
#include "atomcheck/trace.hpp"
#include "atomcheck/trace_io.hpp"
#include "atomcheck/validate.hpp"
#include "atomcheck/transactions.hpp"
#include "atomcheck/generator.hpp"
#include "atomcheck/verdict.hpp"
#include "atomcheck/aerodrome.hpp"
#include "atomcheck/aerodrome_opt.hpp"
#include "atomcheck/velodrome.hpp"
#include "atomcheck/oracle.hpp"
#include "atomcheck/analysis.hpp"
#include "atomcheck/metainfo.hpp"
#include "atomcheck/filter.hpp"
#include "atomcheck/bench.hpp"
