#pragma once

#include "matroid_er/builtins.hpp"
#include "matroid_er/compiled.hpp"
#include "matroid_er/compiler.hpp"
#include "matroid_er/etr.hpp"
#include "matroid_er/four_squares.hpp"
#include "matroid_er/io.hpp"
#include "matroid_er/linear.hpp"
#include "matroid_er/matroid.hpp"
#include "matroid_er/normalize.hpp"
#include "matroid_er/order_type.hpp"
#include "matroid_er/polynomial.hpp"
#include "matroid_er/projective.hpp"
#include "matroid_er/rational.hpp"
#include "matroid_er/realizer.hpp"
#include "matroid_er/verify.hpp"
