#pragma once

#include "labopt/benchmarks.hpp"
#include "labopt/campaign.hpp"
#include "labopt/cluster_box.hpp"
#include "labopt/cssr.hpp"
#include "labopt/dbscan.hpp"
#include "labopt/error.hpp"
#include "labopt/expr.hpp"
#include "labopt/kdtree.hpp"
#include "labopt/lab.hpp"
#include "labopt/lab_constrained.hpp"
#include "labopt/parallel.hpp"
#include "labopt/population.hpp"
#include "labopt/problem.hpp"
#include "labopt/problem_io.hpp"
#include "labopt/rng.hpp"
#include "labopt/stats.hpp"
