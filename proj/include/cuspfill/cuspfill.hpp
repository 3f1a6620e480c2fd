#pragma once

#include "cuspfill/bounds.hpp"
#include "cuspfill/completion.hpp"
#include "cuspfill/density.hpp"
#include "cuspfill/error.hpp"
#include "cuspfill/io.hpp"
#include "cuspfill/numerics.hpp"
#include "cuspfill/obstruction.hpp"
#include "cuspfill/profile.hpp"
