#pragma once

#include "rspcert/errors.hpp"
#include "rspcert/io.hpp"
#include "rspcert/l0_oracle.hpp"
#include "rspcert/linalg.hpp"
#include "rspcert/matrix.hpp"
#include "rspcert/order_k.hpp"
#include "rspcert/rsp.hpp"
#include "rspcert/simplex.hpp"
#include "rspcert/tolerance.hpp"
