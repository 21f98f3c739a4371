#pragma once

#include "cartan/commands.hpp"
#include "cartan/domains.hpp"
#include "cartan/error.hpp"
#include "cartan/hereditary.hpp"
#include "cartan/json_io.hpp"
#include "cartan/lifting.hpp"
#include "cartan/linalg.hpp"
#include "cartan/matrix.hpp"
#include "cartan/random.hpp"
#include "cartan/verifier.hpp"
