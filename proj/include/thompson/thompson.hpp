#pragma once

#include "thompson/ball.hpp"
#include "thompson/constants.hpp"
#include "thompson/definable.hpp"
#include "thompson/dyadic.hpp"
#include "thompson/element.hpp"
#include "thompson/equation.hpp"
#include "thompson/errors.hpp"
#include "thompson/poly.hpp"
#include "thompson/reduction.hpp"
#include "thompson/support.hpp"
#include "thompson/system_io.hpp"
#include "thompson/word.hpp"
