# Generated by oz2py 0.1.0. Do not edit.
# source sha256: 58797c37db3e3eb05453959565db6908264720be3e83ed683eb5ce6a02cf453c

from ozruntime import FrozenConstantViolation, choice, conjunction, decorate_all, inv, parallel, post, pre, sequential


@pre(lambda n: isinstance(n, int) and not isinstance(n, bool) and n >= 0)
def Nat(n):
    return n


@pre(lambda n: isinstance(n, int) and not isinstance(n, bool))
def Int(n):
    return n


@inv(lambda self: self.limit in {1000, 2000, 3000})
@inv(lambda self: self.balance + self.limit >= 0)
class CreditCard:
    limit = None
    balance = None

    def __init__(self, limit):
        self.limit = Nat(limit)
        self.balance = Int(0)

    def __setattr__(self, name, value):
        if name in ("limit",) and name in self.__dict__:
            raise FrozenConstantViolation(type(self).__name__, name)
        object.__setattr__(self, name, value)

    @pre(lambda self, amount: amount <= self.balance + self.limit)
    def withdraw(self, amount):
        amount = Nat(amount)
        self.balance = Int(self.balance - amount)

    def deposit(self, amount):
        amount = Nat(amount)
        self.balance = Int(self.balance + amount)

    @post(lambda old, self, result: result == old.balance + self.limit)
    def withdrawAvail(self):
        amount = Nat(self.balance + self.limit)
        self.balance = Int(-self.limit)
        return amount

    withdrawAvail.__oz_outputs__ = ("amount",)
