class FrftError(Exception):
    pass

class QuadratureError(FrftError, ValueError):
    pass

class PlanError(FrftError, ValueError):
    pass

class GridError(FrftError, ValueError):
    pass

class ModelDomainError(FrftError, ValueError):
    pass

class ConvergenceError(FrftError, ArithmeticError):
    pass

class ConfigError(FrftError, ValueError):
    pass
