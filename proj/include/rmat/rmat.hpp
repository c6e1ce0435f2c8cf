/*******************************************************************************
 * include/rmat/rmat.hpp
 *
 * R-MAT graph generation with constant work per edge
 ******************************************************************************/
#pragma once

#include <rmat/alias.hpp>
#include <rmat/bench.hpp>
#include <rmat/binomial.hpp>
#include <rmat/edge.hpp>
#include <rmat/edge_io.hpp>
#include <rmat/error.hpp>
#include <rmat/generator.hpp>
#include <rmat/naive.hpp>
#include <rmat/params.hpp>
#include <rmat/partition.hpp>
#include <rmat/postprocess.hpp>
#include <rmat/random.hpp>
#include <rmat/stats.hpp>
#include <rmat/table.hpp>
