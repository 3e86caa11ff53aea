#pragma once

//
// Umbrella header: the full exact kernel for higher-degree pairing geometry.
//
//   rational.hpp    exact rational scalars
//   polynomial.hpp  multivariate polynomials over the rationals
//   graded.hpp      permutations, block shuffles, Koszul signs
//   linalg.hpp      exact Gaussian elimination and nullspaces
//   tensor.hpp      forms, multivector fields, wedge/contraction/d/Lie/Schouten
//   space.hpp       pairing spaces, the two fundamental equations, classification
//   brackets.hpp    the bracket tower, closed-form associates, coherence reports
//   manifest.hpp    the textual manifest language
//   runner.hpp      check execution and deterministic reports
//

#include "brackets.hpp"
#include "errors.hpp"
#include "graded.hpp"
#include "linalg.hpp"
#include "manifest.hpp"
#include "polynomial.hpp"
#include "random_gen.hpp"
#include "rational.hpp"
#include "runner.hpp"
#include "space.hpp"
#include "tensor.hpp"
