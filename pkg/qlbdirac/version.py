version_info = (0, 3, 0)
version_string = '.'.join(map(str, version_info))
