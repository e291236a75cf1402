class Sort:
    @staticmethod
    def sort_nested(data, sort_keys=None):
        """
        Sorts dict keys and orders lists of rows by ``sort_keys``. Missing and
        None values sort last.
        """
        if sort_keys is None:
            sort_keys = ["gamma", "lambda", "name", "ops", "quantity"]

        def get_sort_key(item):
            return tuple(
                (item.get(key) is None, "" if item.get(key) is None else item[key])
                for key in sort_keys
            )

        if isinstance(data, dict):
            return {
                key: Sort.sort_nested(value, sort_keys)
                for key, value in sorted(data.items())
            }
        elif isinstance(data, list):
            if all(isinstance(item, dict) for item in data):
                return sorted(
                    (Sort.sort_nested(item, sort_keys) for item in data),
                    key=get_sort_key,
                )
            else:
                return [Sort.sort_nested(item, sort_keys) for item in data]
        else:
            return data
