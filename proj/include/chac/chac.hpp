#pragma once

#include "chac/band_matrix.hpp"
#include "chac/compare.hpp"
#include "chac/dendrogram.hpp"
#include "chac/engine.hpp"
#include "chac/error.hpp"
#include "chac/fusion_heap.hpp"
#include "chac/generate.hpp"
#include "chac/io.hpp"
#include "chac/model_selection.hpp"
#include "chac/oracle.hpp"
#include "chac/pencil.hpp"
#include "chac/plot.hpp"
#include "chac/similarity.hpp"
