#pragma once

#include "phylonet/errors.hpp"
#include "phylonet/graph.hpp"
#include "phylonet/workspace.hpp"
#include "phylonet/network.hpp"
#include "phylonet/canonical.hpp"
#include "phylonet/upnf.hpp"
#include "phylonet/trees.hpp"
#include "phylonet/moves.hpp"
#include "phylonet/props.hpp"
#include "phylonet/search.hpp"
#include "phylonet/rewrite.hpp"
#include "phylonet/caterpillar.hpp"
#include "phylonet/reduce.hpp"
#include "phylonet/fixtures.hpp"
#include "phylonet/json_io.hpp"
