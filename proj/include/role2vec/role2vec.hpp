#pragma once

// Everything except the CLI layer (config.hpp, commands.hpp).

#include "role2vec/alias_table.hpp"
#include "role2vec/binning.hpp"
#include "role2vec/embedding.hpp"
#include "role2vec/error.hpp"
#include "role2vec/evaluation.hpp"
#include "role2vec/factorization.hpp"
#include "role2vec/features.hpp"
#include "role2vec/generators.hpp"
#include "role2vec/graph.hpp"
#include "role2vec/kmeans.hpp"
#include "role2vec/motifs.hpp"
#include "role2vec/phi.hpp"
#include "role2vec/pipeline.hpp"
#include "role2vec/random.hpp"
#include "role2vec/theory.hpp"
#include "role2vec/transitions.hpp"
#include "role2vec/typing.hpp"
#include "role2vec/walks.hpp"
