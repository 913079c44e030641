#pragma once

#include "atoms.hpp"
#include "suppset.hpp"
#include "freenom.hpp"
#include "nomrep.hpp"
#include "binding.hpp"
#include "automata.hpp"
#include "io.hpp"
