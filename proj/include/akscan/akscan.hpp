#pragma once

#include "akscan/arthurs_kelly.hpp"
#include "akscan/entanglement.hpp"
#include "akscan/gaussian_states.hpp"
#include "akscan/phase_space.hpp"
#include "akscan/scan.hpp"
#include "akscan/types.hpp"
