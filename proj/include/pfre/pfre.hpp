#ifndef PFRE_PFRE_HPP
#define PFRE_PFRE_HPP

#include "bundle.hpp"
#include "curve.hpp"
#include "frechet.hpp"
#include "generate.hpp"
#include "hausdorff.hpp"
#include "index.hpp"
#include "io.hpp"
#include "metric_oracles.hpp"
#include "nn.hpp"
#include "simplification_tree.hpp"
#include "tadd.hpp"

#endif  // PFRE_PFRE_HPP
