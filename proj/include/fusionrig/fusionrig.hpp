#ifndef FUSIONRIG_FUSIONRIG_HPP
#define FUSIONRIG_FUSIONRIG_HPP

#include "fusionrig/errors.hpp"
#include "fusionrig/fusion_rules.hpp"
#include "fusionrig/basis_label.hpp"
#include "fusionrig/raw_element.hpp"
#include "fusionrig/witness.hpp"
#include "fusionrig/rig_construction.hpp"
#include "fusionrig/rig_witnesses.hpp"
#include "fusionrig/random.hpp"
#include "fusionrig/expression.hpp"
#include "fusionrig/parallel.hpp"
#include "fusionrig/coherence.hpp"
#include "fusionrig/solver.hpp"
#include "fusionrig/serialization.hpp"
#include "fusionrig/cli.hpp"

#endif  // FUSIONRIG_FUSIONRIG_HPP
