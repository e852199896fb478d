Animals = ['cat', 'dog']
Vehicles = ['car', 'bus']
Unused = ['rock']
response = client.label_detection(image=img)
labels = [o.name for o in response.label_annotations]
if intersects(labels, Vehicles):
    return 'vehicle'
elif intersects(labels, Animals):
    return 'animal'
else:
    return 'other'
