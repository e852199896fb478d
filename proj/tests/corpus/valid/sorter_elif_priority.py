Fruit = ['apple', 'banana', 'pear']
Vegetable = ['carrot', 'potato']
response = client.label_detection(image=img)
for item in response.label_annotations:
    if item.name in Vegetable:
        return 1
    if item.name in Fruit:
        return 2
return 0
