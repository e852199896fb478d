Recycle = ['plastic', 'wood', 'glass', 'paper', 'cardboard', 'metal', 'aluminum', 'tin', 'carton']
Compost = ['food', 'produce', 'snack']
Donate = ['clothing', 'jacket', 'shirt', 'pants', 'footwear', 'shoe']
image = types.Image(content=trash_image)
response = client.label_detection(image=image)
for obj in response.label_annotations:
  if obj.name in Recycle:
    return 'It is recyclable.'
  if obj.name in Compost:
    return 'It is compostable.'
  if obj.name in Donate:
    return 'It is donatable.'
