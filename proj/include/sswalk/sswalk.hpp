#pragma once

#include "sswalk/birth.hpp"
#include "sswalk/error.hpp"
#include "sswalk/lattice.hpp"
#include "sswalk/measure.hpp"
#include "sswalk/params.hpp"
#include "sswalk/smt.hpp"
#include "sswalk/spectral.hpp"
#include "sswalk/walk.hpp"
#include "sswalk/config.hpp"
#include "sswalk/io.hpp"
