#pragma once

// Umbrella header.

#include "qbl/algebra.hpp"
#include "qbl/bundle.hpp"
#include "qbl/certify.hpp"
#include "qbl/mostow.hpp"
#include "qbl/profile.hpp"
#include "qbl/spec_io.hpp"
