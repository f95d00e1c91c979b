#pragma once

#include "btk/error.hpp"
#include "btk/field.hpp"
#include "btk/geometry.hpp"
#include "btk/gl2.hpp"
#include "btk/laurent.hpp"
#include "btk/local_aut.hpp"
#include "btk/mat2.hpp"
#include "btk/qp.hpp"
#include "btk/random.hpp"
#include "btk/tree.hpp"
#include "btk/valuation.hpp"
#include "btk/verify.hpp"
