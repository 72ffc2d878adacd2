import sys


class Account:
    def __init__(self, owner, balance):
        self.owner = owner
        self.balance = balance

    def deposit(self, amount):
        if amount <= 0:
            return False
        self.balance += amount
        return True

    def withdraw(self, amount):
        if amount <= 0 or amount > self.balance:
            return False
        self.balance -= amount
        return True


def process(accounts, line):
    parts = line.split()
    if len(parts) != 3:
        return "bad"
    op, name, value = parts
    amount = int(value)
    if name not in accounts:
        accounts[name] = Account(name, 0)
    acct = accounts[name]
    if op == "dep":
        ok = acct.deposit(amount)
    elif op == "wd":
        ok = acct.withdraw(amount)
    else:
        return "unknown"
    if ok:
        return "ok"
    return "rejected"


def main():
    accounts = {}
    results = 0
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        print(process(accounts, line))
        results += 1
    for name in sorted(accounts):
        print(name, accounts[name].balance)
    print("ops", results)


main()
