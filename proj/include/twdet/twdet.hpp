#pragma once

// Everything at once.

#include "twdet/ccdp.hpp"
#include "twdet/core.hpp"
#include "twdet/counting.hpp"
#include "twdet/errors.hpp"
#include "twdet/gadgets.hpp"
#include "twdet/hardness.hpp"
#include "twdet/io.hpp"
#include "twdet/linalg.hpp"
#include "twdet/msocheck.hpp"
#include "twdet/oracle.hpp"
#include "twdet/rational.hpp"
#include "twdet/treedecomp.hpp"
