class ElementManager:
    """
    Registry of named elements keyed by their ``identifier`` attribute.
    Used for model presets and inversion schemes.
    """

    def __init__(self, items=()):
        self._items = {}

        for item in items:
            self.register(item)

    def register(self, item):
        if item.identifier in self._items:
            raise KeyError('Element already registered: %s' % item.identifier)

        self._items[item.identifier] = item

    def deregister(self, item):
        self._items.pop(getattr(item, 'identifier', item), None)

    def items(self):
        return self._items.items()

    def keys(self):
        return self._items.keys()

    def values(self):
        return self._items.values()

    def get(self, key, default=None):
        return self._items.get(key, default)

    def __getitem__(self, key):
        return self._items[key]

    def __contains__(self, key):
        return key in self._items

    def __iter__(self):
        return iter(self._items)

    def __len__(self):
        return len(self._items)
