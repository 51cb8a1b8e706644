#ifndef INDUCTIVE_INDUCTIVE_HPP
#define INDUCTIVE_INDUCTIVE_HPP

#include "analogy.hpp"
#include "carnap.hpp"
#include "core.hpp"
#include "mixtures.hpp"
#include "random.hpp"
#include "stream.hpp"
#include "symmetry.hpp"

#endif  // INDUCTIVE_INDUCTIVE_HPP
