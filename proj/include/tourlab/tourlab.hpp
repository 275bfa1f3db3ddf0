#pragma once

#include "error.hpp"
#include "core.hpp"
#include "graph.hpp"
#include "presented.hpp"
#include "analysis.hpp"
#include "embedding.hpp"
#include "density.hpp"
#include "io.hpp"
