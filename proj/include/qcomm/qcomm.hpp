#pragma once

// Community detection in quantum networks: continuous-time walk dynamics on a
// complex Hermitian Hamiltonian, node-pair closeness measures derived from
// them, and agglomerative community detection on top.

#include "qcomm/closeness.hpp"
#include "qcomm/errors.hpp"
#include "qcomm/generators.hpp"
#include "qcomm/hermitian.hpp"
#include "qcomm/io.hpp"
#include "qcomm/partition.hpp"
#include "qcomm/pipeline.hpp"
#include "qcomm/rng.hpp"
#include "qcomm/walk.hpp"
