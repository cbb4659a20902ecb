#pragma once

#include "durion/counters.hpp"
#include "durion/errors.hpp"
#include "durion/kern.hpp"
#include "durion/lazy.hpp"
#include "durion/modifiers.hpp"
#include "durion/rational.hpp"
#include "durion/scoreops.hpp"
#include "durion/semiring.hpp"
#include "durion/serialize.hpp"
