# Generated by oz2py 0.1.0. Do not edit.
# source sha256: 0f9e427ae28c84bdae9f5c90f20ce275bff9c7ff5c6fedd23ca1a04d2e4852a8

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


def _update_TwoCards(self):
    self.totalbalance = Int(self.c1.balance + self.c2.balance)


@inv(lambda self: self.c1 != self.c2)
@decorate_all(_update_TwoCards)
class TwoCards:
    c1 = None
    c2 = None
    totalbalance = None

    def __init__(self, c1_limit, c2_limit):
        self.c1 = CreditCard(limit=c1_limit)
        self.c2 = CreditCard(limit=c2_limit)

    @pre(lambda self, card: card != self.c2)
    def replaceCard1(self, card):
        self.c1 = card

    def withdraw1(self, **kwargs):
        return self.c1.withdraw(**kwargs)

    def deposit1(self, **kwargs):
        return self.c1.deposit(**kwargs)

    def transfer(self, **kwargs):
        return conjunction(self.c1.withdraw, self.c2.deposit)(**kwargs)

    def withdrawEither(self, **kwargs):
        return choice(self.c1.withdraw, self.c2.withdraw)(**kwargs)

    def transferAvail(self, **kwargs):
        return parallel(self.c1.withdrawAvail, self.c2.deposit)(**kwargs)

    def transferSeq(self, **kwargs):
        return sequential(self.c1.withdrawAvail, self.c2.deposit)(**kwargs)
