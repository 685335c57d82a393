#pragma once

#include "povm_domain/domain.hpp"
#include "povm_domain/errors.hpp"
#include "povm_domain/estimation.hpp"
#include "povm_domain/linalg.hpp"
#include "povm_domain/povm.hpp"
#include "povm_domain/rng.hpp"
#include "povm_domain/states.hpp"
