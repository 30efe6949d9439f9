#pragma once

#include "locdense/error.hpp"
#include "locdense/rational.hpp"
#include "locdense/graph.hpp"
#include "locdense/graph_io.hpp"
#include "locdense/named_graphs.hpp"
#include "locdense/decomposition.hpp"
#include "locdense/treewidth.hpp"
#include "locdense/homcount.hpp"
#include "locdense/distribution.hpp"
#include "locdense/dense.hpp"
#include "locdense/inequalities.hpp"
#include "locdense/enumeration.hpp"
#include "locdense/corpus.hpp"
