#pragma once
// Umbrella header.

#include "greedylab/coeff_vector.hpp"
#include "greedylab/norms.hpp"
#include "greedylab/space.hpp"
#include "greedylab/gap_sequence.hpp"
#include "greedylab/errors.hpp"
#include "greedylab/greedy.hpp"
#include "greedylab/sampling.hpp"
#include "greedylab/constants.hpp"
#include "greedylab/counterexample.hpp"
#include "greedylab/perturb.hpp"
#include "greedylab/report.hpp"
#include "greedylab/experiments.hpp"
#include "greedylab/acceptance.hpp"
