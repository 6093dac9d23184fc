#pragma once

#include "sbl/common.hpp"
#include "sbl/damage.hpp"
#include "sbl/io.hpp"
#include "sbl/kernels.hpp"
#include "sbl/linalg.hpp"
#include "sbl/modal_data.hpp"
#include "sbl/solver.hpp"
#include "sbl/structural_model.hpp"
#include "sbl/synth.hpp"
#include "sbl/updates.hpp"
